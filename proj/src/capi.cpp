#include "qplab/qplab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "qplab/error.hpp"
#include "qplab/io.hpp"
#include "qplab/report.hpp"
#include "qplab/repr.hpp"

struct qplab_group {
  qplab::FiniteGroup group;
};

namespace {

thread_local std::string last_error;

qplab_status status_of(qplab::ErrorCode code) {
  switch (code) {
    case qplab::ErrorCode::invalid_argument:
    case qplab::ErrorCode::not_applicable:
      return QPLAB_USAGE_ERROR;
    case qplab::ErrorCode::parse:
    case qplab::ErrorCode::not_a_group:
      return QPLAB_INVALID_INPUT;
    case qplab::ErrorCode::io:
      return QPLAB_IO_ERROR;
    case qplab::ErrorCode::cap_exceeded:
      return QPLAB_CAP_EXCEEDED;
    case qplab::ErrorCode::numeric:
      return QPLAB_NUMERIC_ERROR;
  }
  return QPLAB_INTERNAL_ERROR;
}

template <typename F>
qplab_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const qplab::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = std::string("malformed request: ") + e.what();
    return QPLAB_USAGE_ERROR;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return QPLAB_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return QPLAB_INTERNAL_ERROR;
  }
}

char* duplicate(const std::string& s) {
  auto* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

qplab_status null_argument(const char* what) {
  last_error = std::string("null argument: ") + what;
  return QPLAB_USAGE_ERROR;
}

}  // namespace

extern "C" {

const char* qplab_version(void) { return QPLAB_VERSION; }

const char* qplab_last_error(void) { return last_error.c_str(); }

qplab_status qplab_group_build(const char* descriptor, qplab_group** out) {
  if (!descriptor || !out) return null_argument("descriptor/out");
  return guarded([&] {
    *out = new qplab_group{qplab::build_named(descriptor)};
    return QPLAB_OK;
  });
}

qplab_status qplab_group_load(const char* source, qplab_group** out) {
  if (!source || !out) return null_argument("source/out");
  return guarded([&] {
    *out = new qplab_group{qplab::load_group(source)};
    return QPLAB_OK;
  });
}

qplab_status qplab_group_save_cay(const qplab_group* g, const char* path) {
  if (!g || !path) return null_argument("group/path");
  return guarded([&] {
    qplab::write_cayley_table(std::filesystem::path(path), g->group);
    return QPLAB_OK;
  });
}

size_t qplab_group_order(const qplab_group* g) { return g ? g->group.order() : 0; }

uint64_t qplab_group_hash(const qplab_group* g) { return g ? g->group.hash() : 0; }

qplab_status qplab_group_mul(const qplab_group* g, uint32_t a, uint32_t b, uint32_t* out) {
  if (!g || !out) return null_argument("group/out");
  if (a >= g->group.order() || b >= g->group.order()) {
    last_error = "element index out of range";
    return QPLAB_USAGE_ERROR;
  }
  *out = g->group.mul(a, b);
  return QPLAB_OK;
}

qplab_status qplab_group_delta(const qplab_group* g, size_t* out) {
  if (!g || !out) return null_argument("group/out");
  return guarded([&] {
    if (g->group.order() < 2) throw qplab::Error(qplab::ErrorCode::not_applicable, "trivial group");
    *out = qplab::delta(g->group);
    return QPLAB_OK;
  });
}

void qplab_group_free(qplab_group* g) { delete g; }

qplab_status qplab_run_ex(const char* request_json, char** out, char** summary) {
  if (!request_json || !out) return null_argument("request/out");
  *out = nullptr;
  if (summary) *summary = nullptr;
  return guarded([&] {
    nlohmann::json req;
    try {
      req = nlohmann::json::parse(request_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw qplab::Error(qplab::ErrorCode::invalid_argument, std::string("request is not JSON: ") + e.what());
    }
    const auto outcome = qplab::run_request(req);
    *out = duplicate(outcome.text);
    if (summary) *summary = duplicate(outcome.summary);
    return outcome.status == qplab::RunStatus::ok ? QPLAB_OK : QPLAB_CHECK_FAILED;
  });
}

qplab_status qplab_run(const char* request_json, char** out) { return qplab_run_ex(request_json, out, nullptr); }

void qplab_string_free(char* s) { std::free(s); }

}  // extern "C"
