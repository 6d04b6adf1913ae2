// Copyright 2026 The SGRL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// C interface to the library. Objects are opaque handles released with the
// matching *_free function. Every call returns an sgrl_status; on failure
// sgrl_last_error() describes the problem (thread-local, valid until the
// next call on the same thread). Strings returned through char** are
// allocated by the library and released with sgrl_string_free.

#ifndef SGRL_SGRL_C_H_
#define SGRL_SGRL_C_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SGRL_API __declspec(dllexport)
#else
#define SGRL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sgrl_status {
  SGRL_OK = 0,
  SGRL_ERR_DIMENSION = 1,
  SGRL_ERR_CONFIG = 2,
  SGRL_ERR_DATA = 3,
  SGRL_ERR_OUT_OF_RANGE = 4,
  SGRL_ERR_NUMERIC = 5,
  SGRL_ERR_IO = 6,
  SGRL_ERR_BAD_MAGIC = 7,
  SGRL_ERR_VERSION = 8,
  SGRL_ERR_TRUNCATED = 9,
  SGRL_ERR_INCONSISTENT = 10,
  SGRL_ERR_ARGUMENT = 11,
  SGRL_ERR_INTERNAL = 12
} sgrl_status;

typedef struct sgrl_config sgrl_config;
typedef struct sgrl_graph sgrl_graph;
typedef struct sgrl_model sgrl_model;
typedef struct sgrl_scores sgrl_scores;

SGRL_API const char* sgrl_last_error(void);
SGRL_API const char* sgrl_status_name(sgrl_status status);
SGRL_API void sgrl_string_free(char* s);

// ---- Run configuration ----

SGRL_API sgrl_status sgrl_config_new(sgrl_config** out);
SGRL_API void sgrl_config_free(sgrl_config* config);
// Applies the key=value lines of a file on top of the current values.
SGRL_API sgrl_status sgrl_config_load(sgrl_config* config, const char* path);
SGRL_API sgrl_status sgrl_config_set(sgrl_config* config, const char* key, const char* value);
SGRL_API sgrl_status sgrl_config_get(const sgrl_config* config, const char* key, char** out);
// Sets the master seed and re-derives every section seed from it.
SGRL_API sgrl_status sgrl_config_set_seed(sgrl_config* config, uint64_t seed);
// key=value lines for every key starting with prefix ("" for all).
SGRL_API sgrl_status sgrl_config_format(const sgrl_config* config, const char* prefix,
                                        char** out);
// Key, default and description for every key.
SGRL_API sgrl_status sgrl_config_help(char** out);

// ---- Data ----

// Synthetic dataset from the synth.* keys, written into dir.
SGRL_API sgrl_status sgrl_generate(const sgrl_config* config, const char* dir);
// edges.tsv, attrs.csv and (if present) labels.csv from dir.
SGRL_API sgrl_status sgrl_graph_load(const char* dir, sgrl_graph** out);
SGRL_API void sgrl_graph_free(sgrl_graph* graph);
SGRL_API size_t sgrl_graph_node_count(const sgrl_graph* graph);
SGRL_API size_t sgrl_graph_edge_count(const sgrl_graph* graph);

// ---- Models ----

SGRL_API sgrl_status sgrl_pretrain(const sgrl_config* config, const sgrl_graph* graph,
                                   sgrl_model** out);
SGRL_API void sgrl_model_free(sgrl_model* model);
SGRL_API sgrl_status sgrl_model_save(const sgrl_model* model, const char* path);
SGRL_API sgrl_status sgrl_model_load(const char* path, sgrl_model** out);
// Probe history of the pretraining run that produced the model.
SGRL_API sgrl_status sgrl_model_write_probe_history(const sgrl_model* model, const char* path);
SGRL_API sgrl_status sgrl_model_checksum(const sgrl_model* model, uint64_t* out);
SGRL_API sgrl_status sgrl_model_set_threshold(sgrl_model* model, double threshold);
SGRL_API sgrl_status sgrl_model_config(const sgrl_model* model, char** out);

// ---- Detection and evaluation ----

SGRL_API sgrl_status sgrl_detect(const sgrl_model* model, const sgrl_graph* graph,
                                 sgrl_scores** out);
SGRL_API void sgrl_scores_free(sgrl_scores* scores);
SGRL_API size_t sgrl_scores_count(const sgrl_scores* scores);
SGRL_API sgrl_status sgrl_scores_get(const sgrl_scores* scores, size_t i, double* score,
                                     int* flag);
SGRL_API sgrl_status sgrl_scores_write(const sgrl_scores* scores, const sgrl_graph* graph,
                                       const char* path);

// Metric report for a scores file against a labels file. exclude may be
// NULL; nodes labeled in it are skipped.
SGRL_API sgrl_status sgrl_eval(const char* scores_path, const char* labels_path,
                               double threshold, const char* exclude_path, char** report);

// Finite-difference checks of every training loss over `seeds` seeds.
// Writes one line per check to report and the largest error to max_error.
SGRL_API sgrl_status sgrl_gradcheck(int seeds, double* max_error, char** report);

SGRL_API sgrl_status sgrl_param_count(int layers, int hidden_width, int input_width,
                                      long long* out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // SGRL_SGRL_C_H_
