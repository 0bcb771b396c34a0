/*
 * Copyright 2026 The isoas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef ISOAS_ISOAS_H_
#define ISOAS_ISOAS_H_

/*
 * C interface to the isoas natural-language search engine.
 *
 * Every function returns an isoas_status. Structured results are returned
 * as NUL-terminated JSON strings that the caller releases with
 * isoas_string_free(). After a non-OK status, isoas_last_error() returns a
 * JSON object {code, message, detail?} describing the failure; it is
 * thread-local and valid until the next call on the same thread.
 *
 * An isoas_engine_t may be shared between threads.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ISOAS_BUILDING_LIBRARY)
#    define ISOAS_API __declspec(dllexport)
#  else
#    define ISOAS_API __declspec(dllimport)
#  endif
#else
#  define ISOAS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct isoas_engine isoas_engine_t;
typedef struct isoas_server isoas_server_t;

typedef enum isoas_status {
  ISOAS_OK = 0,

  ISOAS_DUPLICATE_PHRASE = 10,
  ISOAS_FORMAT_ERROR = 11,
  ISOAS_CYCLIC_HIERARCHY = 12,
  ISOAS_UNKNOWN_NODE = 13,
  ISOAS_UNKNOWN_PHRASE = 14,

  ISOAS_ENCODING_ERROR = 20,
  ISOAS_EMPTY_INPUT = 21,
  ISOAS_NO_RULE_MATCHES = 22,

  ISOAS_AGREEMENT_VIOLATION = 30,
  ISOAS_COMPOSITION_VIOLATION = 31,
  ISOAS_UNRESOLVABLE = 32,
  ISOAS_MIXED_STORES = 33,
  ISOAS_EMPTY_LIST = 34,
  ISOAS_UNBOUND_PARAMETER = 35,
  ISOAS_ARITY_MISMATCH = 36,
  ISOAS_INVALID_RANGE = 37,
  ISOAS_TYPE_MISMATCH = 38,

  ISOAS_NAME_IN_USE = 40,
  ISOAS_UNKNOWN_STORE = 41,
  ISOAS_WRONG_STATE = 42,
  ISOAS_STORE_DETACHED = 43,
  ISOAS_DUPLICATE_ID = 44,
  ISOAS_MALFORMED_ROW = 45,
  ISOAS_SQL_SYNTAX_ERROR = 46,
  ISOAS_STAGE_ORDER_VIOLATION = 47,
  ISOAS_UNKNOWN_QUERY = 48,
  ISOAS_IO_FAILURE = 49,

  ISOAS_BIND_FAILURE = 60,
  ISOAS_INVALID_ARGUMENT = 61,
  ISOAS_INTERNAL = 99
} isoas_status;

ISOAS_API const char* isoas_version(void);
ISOAS_API const char* isoas_status_name(isoas_status status);
ISOAS_API const char* isoas_last_error(void);
ISOAS_API void isoas_string_free(char* s);

/* Opens (creating if needed) the engine home directory. lexicon_path and
 * ontology_path may be NULL to use the built-in vocabulary. */
ISOAS_API isoas_status isoas_engine_open(const char* home, const char* lexicon_path, const char* ontology_path,
                                         isoas_engine_t** out);
ISOAS_API void isoas_engine_close(isoas_engine_t* engine);

/* Natural-language query. *out_json always receives the PipelineResponse
 * (partial on failure); the status mirrors its error, if any. store may be
 * NULL to keep the session's active store. */
ISOAS_API isoas_status isoas_query(isoas_engine_t* engine, const char* session, const char* store, const char* text,
                                   char** out_json);

/* Restricted SQL over one store; *out_json as for isoas_query. */
ISOAS_API isoas_status isoas_sql(isoas_engine_t* engine, const char* session, const char* store, const char* sql,
                                 char** out_json);

/* Compiles text to a query IR without executing or logging it. */
ISOAS_API isoas_status isoas_compile(isoas_engine_t* engine, const char* store, const char* text, char** out_json);

/* Token stream for text, as a JSON array. */
ISOAS_API isoas_status isoas_tokenize(isoas_engine_t* engine, const char* text, char** out_json);

ISOAS_API isoas_status isoas_store_create(isoas_engine_t* engine, const char* name);
ISOAS_API isoas_status isoas_store_attach(isoas_engine_t* engine, const char* name);
ISOAS_API isoas_status isoas_store_detach(isoas_engine_t* engine, const char* name);
ISOAS_API isoas_status isoas_store_list(isoas_engine_t* engine, char** out_json);

/* Ingests CSV text with header id,name,kind,description,value. */
ISOAS_API isoas_status isoas_ingest(isoas_engine_t* engine, const char* store, const char* csv, size_t* out_count);

/* kind is "ir" or "sql". */
ISOAS_API isoas_status isoas_saved_save(isoas_engine_t* engine, const char* name, const char* kind, const char* body,
                                        int overwrite);
ISOAS_API isoas_status isoas_saved_load(isoas_engine_t* engine, const char* name, char** out_json);
ISOAS_API isoas_status isoas_saved_list(isoas_engine_t* engine, char** out_json);
ISOAS_API isoas_status isoas_saved_delete(isoas_engine_t* engine, const char* name);

/* bindings_json is a JSON array of numbers/strings, or NULL for none. */
ISOAS_API isoas_status isoas_saved_run(isoas_engine_t* engine, const char* session, const char* store,
                                       const char* name, const char* bindings_json, char** out_json);

/* Ledger entries of one session, as a JSON array. */
ISOAS_API isoas_status isoas_history(isoas_engine_t* engine, const char* session, char** out_json);

/* Starts the HTTP service on a background thread. port 0 picks a free
 * port; static_dir may be NULL. The engine must outlive the server. */
ISOAS_API isoas_status isoas_server_start(isoas_engine_t* engine, const char* host, int port, const char* static_dir,
                                          isoas_server_t** out);
ISOAS_API int isoas_server_port(const isoas_server_t* server);
ISOAS_API void isoas_server_stop(isoas_server_t* server);

#ifdef __cplusplus
}
#endif

#endif /* ISOAS_ISOAS_H_ */
