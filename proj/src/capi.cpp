#include "carnot/carnot.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>
#include <sstream>
#include <string>

#include "carnot/harness.hpp"

using namespace carnot;

struct carnot_context {
  const GroupDescriptor* group = &GroupDescriptor::f23();
  MetricParams metric;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  bool timing = true;
};

struct carnot_curve {
  CurveIterate curve;
};

namespace {

thread_local std::string last_error;

carnot_status fail(carnot_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

carnot_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_argument: return CARNOT_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse: return CARNOT_ERR_PARSE;
    case ErrorCode::group_mismatch: return CARNOT_ERR_GROUP_MISMATCH;
    case ErrorCode::domain: return CARNOT_ERR_DOMAIN;
    case ErrorCode::unsupported: return CARNOT_ERR_UNSUPPORTED;
    case ErrorCode::internal: return CARNOT_ERR_INTERNAL;
  }
  return CARNOT_ERR_INTERNAL;
}

template <class Fn>
carnot_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return CARNOT_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::parse_error& e) {
    return fail(CARNOT_ERR_PARSE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(CARNOT_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CARNOT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CARNOT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CARNOT_ERR_INTERNAL, "unknown failure");
  }
}

void need(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::invalid_argument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(std::to_string(j.get<long long>()));
  if (j.is_number_unsigned()) return Scalar(std::to_string(j.get<unsigned long long>()));
  throw Error(ErrorCode::parse, "expected a rational string or an integer, got " + j.dump());
}

std::vector<Scalar> parse_list(const char* text) {
  need(text, "coordinate list");
  std::string s(text);
  const auto first = s.find_first_not_of(" \t\n");
  std::vector<Scalar> out;
  if (first != std::string::npos && s[first] == '[') {
    const Json j = Json::parse(s);
    if (!j.is_array()) throw Error(ErrorCode::parse, "expected a JSON array");
    for (const Json& v : j) out.push_back(scalar_from_json(v));
    return out;
  }
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_scalar(item));
  if (out.empty()) throw Error(ErrorCode::parse, "empty coordinate list");
  return out;
}

GroupPoint parse_point(const carnot_context* ctx, const char* text) { return GroupPoint(*ctx->group, parse_list(text)); }
AlgebraVector parse_vector(const carnot_context* ctx, const char* text) {
  return AlgebraVector(*ctx->group, parse_list(text));
}

std::string join(const std::vector<Scalar>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += to_string(v[i]);
  }
  return out;
}

const char* term_name(NormValue::Term t) {
  switch (t) {
    case NormValue::horizontal: return "horizontal";
    case NormValue::second_layer: return "second_layer";
    case NormValue::third_layer: return "third_layer";
  }
  return "?";
}

Json norm_json(const NormValue& n) {
  const auto exact = n.exact_value();
  return {{"sixth_power", to_string(n.sixth_power())},
          {"exact", exact ? Json(to_string(*exact)) : Json(nullptr)},
          {"approx", n.approx()},
          {"argmax", term_name(n.argmax())}};
}

// typed accessors that reject unknown keys
class Params {
 public:
  explicit Params(const char* text) {
    if (text && *text) j_ = Json::parse(text);
    if (!j_.is_object()) throw Error(ErrorCode::parse, "experiment parameters must be a JSON object");
  }
  unsigned depth(unsigned fallback) { return get<unsigned>("depth", fallback); }
  template <class T>
  T get(const char* key, T fallback) {
    used_.insert(key);
    return j_.contains(key) ? j_[key].get<T>() : fallback;
  }
  Scalar scalar(const char* key, Scalar fallback) {
    used_.insert(key);
    return j_.contains(key) ? scalar_from_json(j_[key]) : fallback;
  }
  std::vector<Scalar> scalars(const char* key, std::vector<Scalar> fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    std::vector<Scalar> out;
    for (const Json& v : j_[key]) out.push_back(scalar_from_json(v));
    return out;
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw Error(ErrorCode::invalid_argument, "unknown parameter '" + it.key() + "'");
  }

 private:
  Json j_ = Json::object();
  std::set<std::string> used_;
};

ExperimentReport run(carnot_context* ctx, const std::string& name, Params& prm) {
  const GroupDescriptor& g = *ctx->group;
  RunOptions opt;
  opt.workers = ctx->workers;
  const std::uint64_t seed = prm.get<std::uint64_t>("seed", ctx->seed);
  if (name == "intersect") {
    const unsigned k = prm.depth(8);
    prm.finish();
    return intersection_certificate(g, k, ctx->metric, opt);
  }
  if (name == "monte-carlo") {
    MonteCarloParams mc;
    mc.depth = prm.depth(mc.depth);
    mc.sigma = prm.scalar("sigma", mc.sigma);
    mc.trials = prm.get<std::size_t>("trials", mc.trials);
    mc.tol = prm.scalar("tol", mc.tol);
    mc.segments = prm.get<std::size_t>("segments", mc.segments);
    mc.refine = prm.get<unsigned>("refine", mc.refine);
    mc.seed = seed;
    prm.finish();
    return monte_carlo_intersections(g, mc, ctx->metric, opt);
  }
  if (name == "transport") {
    const unsigned k = prm.depth(6);
    std::vector<Scalar> e = prm.scalars("direction", {0, 1});
    prm.finish();
    if (e.size() != 2) throw Error(ErrorCode::invalid_argument, "direction needs two components");
    return transport_experiment(g, horizontal(g, e[0], e[1]), k, ctx->metric, seed, opt);
  }
  if (name == "reach") {
    ReachParams rp;
    rp.sigmas = prm.scalars("sigmas", rp.sigmas);
    rp.segments = prm.get<std::size_t>("segments", rp.segments);
    rp.trials = prm.get<std::size_t>("trials", rp.trials);
    rp.seed = seed;
    prm.finish();
    return reach_experiment(g, rp, opt);
  }
  if (name == "engel") {
    const unsigned k = prm.depth(8);
    prm.finish();
    return engel_experiment(k, ctx->metric, seed, opt);
  }
  if (name == "curve-verify") {
    const unsigned k = prm.depth(8);
    prm.finish();
    return curve_verify_experiment(g, k, ctx->metric, opt);
  }
  if (name == "calibrate") {
    const std::size_t trials = prm.get<std::size_t>("trials", 100000);
    prm.finish();
    return calibrate_experiment(g, ctx->metric, trials, seed, opt);
  }
  throw Error(ErrorCode::invalid_argument, "unknown experiment '" + name + "'");
}

}  // namespace

extern "C" {

const char* carnot_last_error(void) { return last_error.c_str(); }

const char* carnot_status_name(carnot_status status) {
  switch (status) {
    case CARNOT_OK: return "ok";
    case CARNOT_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CARNOT_ERR_PARSE: return "parse";
    case CARNOT_ERR_GROUP_MISMATCH: return "group_mismatch";
    case CARNOT_ERR_DOMAIN: return "domain";
    case CARNOT_ERR_UNSUPPORTED: return "unsupported";
    case CARNOT_ERR_INTERNAL: return "internal";
    case CARNOT_ERR_NULL: return "null";
  }
  return "unknown";
}

const char* carnot_version(void) { return kReportVersion; }

void carnot_string_free(char* s) { std::free(s); }

carnot_status carnot_context_new(const char* group, carnot_context** out) {
  if (!out) return fail(CARNOT_ERR_NULL, "output handle is null");
  *out = nullptr;
  return guarded([&] {
    auto ctx = std::make_unique<carnot_context>();
    if (group) ctx->group = &GroupDescriptor::from_tag(group);
    *out = ctx.release();
  });
}

void carnot_context_free(carnot_context* ctx) { delete ctx; }

carnot_status carnot_context_set_metric(carnot_context* ctx, const char* eps1, const char* eps2, const char* eps3) {
  if (!ctx) return fail(CARNOT_ERR_NULL, "context is null");
  return guarded([&] {
    MetricParams p = ctx->metric;
    if (eps1) p.eps1 = parse_scalar(eps1);
    if (eps2) p.eps2 = parse_scalar(eps2);
    if (eps3) p.eps3 = parse_scalar(eps3);
    p.validate();
    ctx->metric = p;
  });
}

carnot_status carnot_context_set_seed(carnot_context* ctx, uint64_t seed) {
  if (!ctx) return fail(CARNOT_ERR_NULL, "context is null");
  ctx->seed = seed;
  return CARNOT_OK;
}

carnot_status carnot_context_set_workers(carnot_context* ctx, unsigned workers) {
  if (!ctx) return fail(CARNOT_ERR_NULL, "context is null");
  ctx->workers = workers;
  return CARNOT_OK;
}

carnot_status carnot_context_set_timing(carnot_context* ctx, int enabled) {
  if (!ctx) return fail(CARNOT_ERR_NULL, "context is null");
  ctx->timing = enabled != 0;
  return CARNOT_OK;
}

carnot_status carnot_context_group(const carnot_context* ctx, const char** name, size_t* dimension) {
  if (!ctx) return fail(CARNOT_ERR_NULL, "context is null");
  if (name) *name = ctx->group->kind() == GroupKind::f23 ? "f23" : "engel";
  if (dimension) *dimension = ctx->group->dimension();
  return CARNOT_OK;
}

#define CARNOT_NEED_CTX_OUT                                     \
  if (!ctx) return fail(CARNOT_ERR_NULL, "context is null");    \
  if (!out) return fail(CARNOT_ERR_NULL, "output is null");     \
  *out = nullptr

carnot_status carnot_mul(carnot_context* ctx, const char* x, const char* y, char** out) {
  CARNOT_NEED_CTX_OUT;
  return guarded([&] { *out = dup(join((parse_point(ctx, x) * parse_point(ctx, y)).coords())); });
}

carnot_status carnot_inv(carnot_context* ctx, const char* x, char** out) {
  CARNOT_NEED_CTX_OUT;
  return guarded([&] { *out = dup(join(inverse(parse_point(ctx, x)).coords())); });
}

carnot_status carnot_dilate(carnot_context* ctx, const char* lambda, const char* x, char** out) {
  CARNOT_NEED_CTX_OUT;
  return guarded([&] {
    need(lambda, "lambda");
    *out = dup(join(dilate(parse_scalar(lambda), parse_point(ctx, x)).coords()));
  });
}

carnot_status carnot_exp(carnot_context* ctx, const char* v, char** out) {
  CARNOT_NEED_CTX_OUT;
  return guarded([&] { *out = dup(join(exp_c2(parse_vector(ctx, v)).coords())); });
}

carnot_status carnot_log(carnot_context* ctx, const char* x, char** out) {
  CARNOT_NEED_CTX_OUT;
  return guarded([&] { *out = dup(join(log_c2(parse_point(ctx, x)).coords())); });
}

carnot_status carnot_norm(carnot_context* ctx, const char* x, char** out_json) {
  char** out = out_json;
  CARNOT_NEED_CTX_OUT;
  return guarded([&] { *out = dup(norm_json(box_norm(parse_point(ctx, x), ctx->metric)).dump()); });
}

carnot_status carnot_dist(carnot_context* ctx, const char* x, const char* y, char** out_json) {
  char** out = out_json;
  CARNOT_NEED_CTX_OUT;
  return guarded(
      [&] { *out = dup(norm_json(distance(parse_point(ctx, x), parse_point(ctx, y), ctx->metric)).dump()); });
}

carnot_status carnot_dist_to_subgroup(carnot_context* ctx, const char* w, const char* e, char** out_json) {
  char** out = out_json;
  CARNOT_NEED_CTX_OUT;
  return guarded([&] {
    const SubgroupDistance d = dist_to_subgroup(parse_point(ctx, w), parse_vector(ctx, e), ctx->metric);
    Json j = {{"exact", d.exact},
              {"lower", d.lower},
              {"upper", d.upper},
              {"argmin", to_string(d.argmin)},
              {"attained", norm_json(d.attained)}};
    if (d.exact) j["value"] = norm_json(d.value);
    *out = dup(j.dump());
  });
}

carnot_status carnot_cone_test(carnot_context* ctx, const char* w, const char* axis, const char* sigma, char** out_json) {
  char** out = out_json;
  CARNOT_NEED_CTX_OUT;
  return guarded([&] {
    need(sigma, "sigma");
    const GroupPoint x = parse_point(ctx, w);
    const ConeSpec cone(axis ? parse_vector(ctx, axis) : horizontal(*ctx->group, 0, 1), parse_scalar(sigma));
    Json j = Json::object();
    const AlgebraVector v = log_c2(x);
    j["euclidean"] = is_horizontal(v) ? Json(in_euclidean_cone(v, cone)) : Json(nullptr);
    j["metric"] = to_string(in_metric_cone(x, cone, ctx->metric));
    const bool on_axis = cone.axis() == horizontal(*ctx->group, 0, 1);
    j["closure"] = on_axis ? Json(in_semigroup_closure(x)) : Json(nullptr);
    if (on_axis) j["closure_terms"] = [&] {
      Json t = Json::array();
      for (const Scalar& s : semigroup_closure_terms(x)) t.push_back(to_string(s));
      return t;
    }();
    *out = dup(j.dump());
  });
}

carnot_status carnot_curve_new(carnot_context* ctx, unsigned depth, carnot_curve** out) {
  CARNOT_NEED_CTX_OUT;
  return guarded([&] { *out = new carnot_curve{CurveIterate(depth, ctx->metric.eps3, *ctx->group)}; });
}

void carnot_curve_free(carnot_curve* curve) { delete curve; }

carnot_status carnot_curve_interval_count(const carnot_curve* curve, size_t* count) {
  if (!curve || !count) return fail(CARNOT_ERR_NULL, "curve or output is null");
  *count = curve->curve.level().intervals.size();
  return CARNOT_OK;
}

carnot_status carnot_curve_eval(const carnot_curve* curve, const char* t, char** out) {
  if (!curve || !out) return fail(CARNOT_ERR_NULL, "curve or output is null");
  *out = nullptr;
  return guarded([&] {
    need(t, "parameter");
    *out = dup(join(curve->curve(parse_scalar(t)).coords()));
  });
}

carnot_status carnot_curve_json(const carnot_curve* curve, char** out_json) {
  if (!curve || !out_json) return fail(CARNOT_ERR_NULL, "curve or output is null");
  *out_json = nullptr;
  return guarded([&] {
    Json j = curve_json(curve->curve.depth(), curve->curve.eps3());
    j["group"] = curve->curve.group().kind() == GroupKind::f23 ? "f23" : "engel";
    *out_json = dup(j.dump());
  });
}

carnot_status carnot_curve_csv(const carnot_curve* curve, char** out_csv) {
  if (!curve || !out_csv) return fail(CARNOT_ERR_NULL, "curve or output is null");
  *out_csv = nullptr;
  return guarded([&] { *out_csv = dup(curve_csv(curve->curve.depth(), curve->curve.eps3(), curve->curve.group())); });
}

carnot_status carnot_run_experiment(carnot_context* ctx, const char* name, const char* params_json, char** report_json,
                                    int* passed) {
  if (!ctx || !name || !report_json) return fail(CARNOT_ERR_NULL, "context, name or output is null");
  *report_json = nullptr;
  if (passed) *passed = 0;
  return guarded([&] {
    Params prm(params_json);
    const ExperimentReport r = run(ctx, name, prm);
    *report_json = dup(r.to_json(ctx->timing).dump(2));
    if (passed) *passed = r.pass ? 1 : 0;
  });
}

}  // extern "C"
