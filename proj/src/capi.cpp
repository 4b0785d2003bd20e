#include "offtd/capi.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "learners.hpp"
#include "types.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* malloc_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

otd_status status_from(const std::exception& e) {
  set_error(e.what());
  if (dynamic_cast<const std::invalid_argument*>(&e)) {
    return OTD_ERR_INVALID_ARGUMENT;
  }
  return OTD_ERR_RUNTIME;
}

otd_status require(bool ok, const char* msg) {
  if (ok) return OTD_OK;
  set_error(msg);
  return OTD_ERR_INVALID_ARGUMENT;
}

offtd::FeatureVector make_features(int dim, const int32_t* idx,
                                   const double* val, int32_t n) {
  offtd::FeatureVector x;
  x.dim = dim;
  x.idx.reserve(static_cast<std::size_t>(n));
  for (int32_t i = 0; i < n; ++i) {
    const int32_t j = idx[i];
    if (j < 0 || j >= dim) {
      throw std::invalid_argument("feature index out of range");
    }
    if (i > 0 && j <= idx[i - 1]) {
      throw std::invalid_argument("feature indices must be strictly ascending");
    }
    x.idx.push_back(j);
  }
  if (val) x.val.assign(val, val + n);
  return x;
}

}  // namespace

struct otd_learner {
  offtd::Learner impl;
};

extern "C" {

const char* otd_version(void) { return "0.1.0"; }

const char* otd_last_error(void) { return g_last_error.c_str(); }

void otd_string_free(char* s) { std::free(s); }

otd_status otd_command(const char* command, const char* config_json,
                       char** out_json) {
  if (otd_status st = require(command != nullptr, "command is NULL")) return st;
  try {
    const offtd::Options opts =
        offtd::options_from_json(config_json ? config_json : "{}");
    const std::string result = offtd::run_command(command, opts);
    if (out_json) *out_json = malloc_string(result);
    set_error("");
    return OTD_OK;
  } catch (const std::exception& e) {
    return status_from(e);
  }
}

otd_learner* otd_learner_new(const char* config_json, int32_t dim) {
  try {
    if (!config_json) throw std::invalid_argument("config_json is NULL");
    if (dim <= 0) throw std::invalid_argument("dim must be positive");
    const auto [algo, cfg] = offtd::learner_config_from_json(config_json);
    offtd::validate_learner_config(algo, cfg);
    auto* handle = new otd_learner{offtd::Learner(algo, cfg, dim)};
    set_error("");
    return handle;
  } catch (const std::exception& e) {
    status_from(e);
    return nullptr;
  }
}

void otd_learner_free(otd_learner* lrn) { delete lrn; }

otd_status otd_learner_step(otd_learner* lrn, const otd_transition* t) {
  if (otd_status st = require(lrn && t, "NULL argument")) return st;
  try {
    if (t->x_dim != lrn->impl.dim()) {
      throw std::invalid_argument("x_dim does not match learner dim");
    }
    if (t->x_n < 0 || t->xn_n < 0 || (t->x_n > 0 && !t->x_idx) ||
        (t->xn_n > 0 && !t->xn_idx)) {
      throw std::invalid_argument("bad sparse feature arrays");
    }
    const offtd::FeatureVector x =
        make_features(t->x_dim, t->x_idx, t->x_val, t->x_n);
    const offtd::FeatureVector xn =
        make_features(t->x_dim, t->xn_idx, t->xn_val, t->xn_n);
    offtd::Transition tr;
    tr.state = t->state;
    tr.action = t->action;
    tr.next_state = t->next_state;
    tr.reward = t->reward;
    tr.gamma_next = t->gamma_next;
    tr.pi_prob = t->pi_prob;
    tr.b_prob = t->b_prob;
    tr.interest = t->interest;
    tr.x = &x;
    tr.x_next = &xn;
    lrn->impl.step(tr);
    set_error("");
    return OTD_OK;
  } catch (const std::exception& e) {
    return status_from(e);
  }
}

otd_status otd_learner_predict(const otd_learner* lrn, const int32_t* x_idx,
                               const double* x_val, int32_t x_n, double* out) {
  if (otd_status st = require(lrn && out && (x_n == 0 || x_idx),
                              "NULL argument")) {
    return st;
  }
  try {
    const offtd::FeatureVector x =
        make_features(lrn->impl.dim(), x_idx, x_val, x_n);
    *out = lrn->impl.predict(x);
    set_error("");
    return OTD_OK;
  } catch (const std::exception& e) {
    return status_from(e);
  }
}

otd_status otd_learner_weights(const otd_learner* lrn, double* out, int32_t n) {
  if (otd_status st = require(lrn && out, "NULL argument")) return st;
  if (otd_status st = require(n >= lrn->impl.dim(), "buffer too small")) {
    return st;
  }
  const auto& w = lrn->impl.weights().w;
  std::memcpy(out, w.data(), w.size() * sizeof(double));
  set_error("");
  return OTD_OK;
}

int32_t otd_learner_dim(const otd_learner* lrn) {
  return lrn ? lrn->impl.dim() : 0;
}

int64_t otd_learner_steps(const otd_learner* lrn) {
  return lrn ? lrn->impl.steps() : 0;
}

int32_t otd_learner_diverged(const otd_learner* lrn) {
  return (lrn && lrn->impl.diverged()) ? 1 : 0;
}

otd_status otd_learner_serialize(const otd_learner* lrn, char** out_json) {
  if (otd_status st = require(lrn && out_json, "NULL argument")) return st;
  try {
    *out_json = malloc_string(lrn->impl.serialize());
    set_error("");
    return OTD_OK;
  } catch (const std::exception& e) {
    return status_from(e);
  }
}

otd_learner* otd_learner_deserialize(const char* snapshot_json) {
  try {
    if (!snapshot_json) throw std::invalid_argument("snapshot_json is NULL");
    auto* handle =
        new otd_learner{offtd::Learner::deserialize(snapshot_json)};
    set_error("");
    return handle;
  } catch (const std::exception& e) {
    status_from(e);
    return nullptr;
  }
}

}  // extern "C"
