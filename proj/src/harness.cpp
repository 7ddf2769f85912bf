#include "carnot/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "carnot/parallel.hpp"

namespace carnot {

namespace {

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Json scalars_json(const std::vector<Scalar>& v) {
  Json out = Json::array();
  for (const Scalar& s : v) out.push_back(to_string(s));
  return out;
}

std::string group_tag(const GroupDescriptor& g) { return g.kind() == GroupKind::f23 ? "f23" : "engel"; }

Json base_params(const GroupDescriptor& g, const MetricParams& p) {
  Json j = Json::object();
  j["group"] = group_tag(g);
  j["eps"] = params_json(p);
  return j;
}

// endpoints and center of every level-k interval, increasing in t
struct CurveSample {
  Scalar t;
  std::size_t interval;
  GroupPoint x;
};

std::vector<CurveSample> certificate_points(const CurveIterate& c) {
  std::vector<CurveSample> out;
  const auto& iv = c.level().intervals;
  for (std::size_t j = 0; j < iv.size(); ++j)
    for (const Scalar& t : {iv[j].a, iv[j].center(), iv[j].b}) out.push_back({t, j, c(t)});
  return out;
}

struct PairScan {
  std::size_t pairs = 0;
  std::size_t same_interval = 0;
  std::size_t violations = 0;
  std::size_t mismatches = 0;
  bool have_margin = false;
  Scalar margin;  // max over pairs of the smallest closure term; < 0 means excluded
  std::size_t margin_i = 0, margin_j = 0;
  Json witnesses = Json::array();
};

// eval(i, j, w) fills w with the element to test and returns false on a
// preimage mismatch.
template <class Eval>
PairScan scan_pairs(const std::vector<CurveSample>& pts, const RunOptions& opt, Eval&& eval) {
  const std::size_t n = pts.size();
  const std::size_t blocks = std::min<std::size_t>(64, std::max<std::size_t>(n, 1));
  std::vector<PairScan> part(blocks);
  parallel_blocks(n, blocks, opt.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    PairScan& s = part[b];
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (pts[i].interval == pts[j].interval) {
          ++s.same_interval;
          continue;
        }
        ++s.pairs;
        std::optional<GroupPoint> w;
        if (!eval(i, j, w)) ++s.mismatches;
        const std::vector<Scalar> terms = semigroup_closure_terms(*w);
        const Scalar lowest = *std::min_element(terms.begin(), terms.end());
        if (!s.have_margin || lowest > s.margin) {
          s.have_margin = true;
          s.margin = lowest;
          s.margin_i = i;
          s.margin_j = j;
        }
        if (lowest >= 0) {
          ++s.violations;
          if (s.witnesses.size() < opt.max_witnesses)
            s.witnesses.push_back({{"t0", to_string(pts[i].t)},
                                   {"t", to_string(pts[j].t)},
                                   {"p", point_json(pts[i].x)},
                                   {"q", point_json(pts[j].x)},
                                   {"w", point_json(*w)},
                                   {"terms", scalars_json(terms)}});
        }
      }
  });
  PairScan total;
  for (PairScan& s : part) {
    total.pairs += s.pairs;
    total.same_interval += s.same_interval;
    total.violations += s.violations;
    total.mismatches += s.mismatches;
    if (s.have_margin && (!total.have_margin || s.margin > total.margin)) {
      total.have_margin = true;
      total.margin = s.margin;
      total.margin_i = s.margin_i;
      total.margin_j = s.margin_j;
    }
    for (auto& w : s.witnesses)
      if (total.witnesses.size() < opt.max_witnesses) total.witnesses.push_back(std::move(w));
  }
  return total;
}

void write_scan(const PairScan& s, const std::vector<CurveSample>& pts, Json& counts) {
  counts["points"] = pts.size();
  counts["pairs"] = s.pairs;
  counts["same_interval_pairs"] = s.same_interval;
  counts["violations"] = s.violations;
  if (s.have_margin) {
    counts["tightest_margin"] = to_string(s.margin);
    counts["tightest_pair"] = {to_string(pts[s.margin_i].t), to_string(pts[s.margin_j].t)};
  }
}

Json curve_report_counts(const CurveReport& r) {
  Json checks = Json::object();
  for (const CurveCheck& c : r.checks)
    checks[c.name] = {{"pass", c.pass}, {"checked", c.checked}, {"worst_ratio", c.worst_ratio}};
  return checks;
}

Json curve_report_witnesses(const CurveReport& r, std::size_t limit) {
  Json out = Json::array();
  for (const CurveViolation& v : r.violations) {
    if (out.size() >= limit) break;
    out.push_back({{"check", v.check}, {"detail", v.detail}});
  }
  return out;
}

AlgebraVector x2_axis(const GroupDescriptor& g) { return horizontal(g, 0, 1); }

GroupPoint random_point(const GroupDescriptor& g, std::mt19937_64& rng) {
  std::vector<Scalar> c(g.dimension());
  for (Scalar& v : c) v = random_grid(rng, -1, 1, 1u << 8);
  return GroupPoint(g, std::move(c));
}

}  // namespace

Json ExperimentReport::to_json(bool timing) const {
  Json j = Json::object();
  j["name"] = name;
  j["version"] = kReportVersion;
  j["params"] = params;
  j["pass"] = pass;
  j["counts"] = counts;
  j["witnesses"] = witnesses;
  j["wall_ms"] = timing ? wall_ms : 0.0;
  return j;
}

Json point_json(const GroupPoint& x) { return scalars_json(x.coords()); }

Json params_json(const MetricParams& p) {
  return {{"eps1", to_string(p.eps1)}, {"eps2", to_string(p.eps2)}, {"eps3", to_string(p.eps3)}};
}

ExperimentReport intersection_certificate(const GroupDescriptor& g, unsigned k, const MetricParams& p,
                                          const RunOptions& opt) {
  if (k < 2) throw Error(ErrorCode::domain, "intersection certificate needs depth >= 2");
  p.validate();
  Stopwatch clock;
  ExperimentReport r;
  r.name = "intersect";
  r.params = base_params(g, p);
  r.params["depth"] = k;
  const CurveIterate curve(k, p.eps3, g);
  const auto pts = certificate_points(curve);
  PairScan s = scan_pairs(pts, opt, [&](std::size_t i, std::size_t j, std::optional<GroupPoint>& w) {
    w = inverse(pts[i].x) * pts[j].x;
    return true;
  });
  write_scan(s, pts, r.counts);
  r.witnesses = std::move(s.witnesses);
  r.pass = s.violations == 0;
  r.wall_ms = clock.ms();
  return r;
}

ExperimentReport monte_carlo_intersections(const GroupDescriptor& g, const MonteCarloParams& mc, const MetricParams& p,
                                           const RunOptions& opt) {
  if (mc.trials == 0) throw Error(ErrorCode::invalid_argument, "need at least one trial");
  if (mc.tol <= 0) throw Error(ErrorCode::domain, "tolerance must be positive");
  p.validate();
  Stopwatch clock;
  ExperimentReport r;
  r.name = "monte-carlo";
  r.params = base_params(g, p);
  r.params["depth"] = mc.depth;
  r.params["sigma"] = to_string(mc.sigma);
  r.params["trials"] = mc.trials;
  r.params["seed"] = mc.seed;
  r.params["tol"] = to_string(mc.tol);
  r.params["segments"] = mc.segments;
  r.params["refine"] = mc.refine;

  const CurveIterate curve(mc.depth, p.eps3, g);
  std::vector<Scalar> ts;
  std::vector<GroupPoint> centers;
  for (const Interval& iv : curve.level().intervals) {
    ts.push_back(iv.center());
    centers.push_back(curve(iv.center()));
  }
  const std::size_t n = centers.size();

  std::optional<NormValue> min_dist;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      NormValue d = distance(centers[i], centers[j], p);
      if (!min_dist || d < *min_dist) min_dist = d;
    }
  const bool dominated = min_dist && min_dist->compare(2 * mc.tol) <= 0;

  const ConeSpec cone(x2_axis(g), mc.sigma);
  const Scalar reach = mc.tol / p.eps1;
  struct Trial {
    std::size_t start = 0;
    std::uint64_t seed = 0;
    std::vector<std::size_t> hit;
  };
  std::vector<Trial> trials(mc.trials);
  parallel_blocks(mc.trials, 64, opt.workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      Trial& tr = trials[i];
      tr.seed = derive_seed(mc.seed, i);
      std::mt19937_64 rng(tr.seed);
      tr.start = rng() % n;
      const ControlCurve c = sample_cone_curve(cone, mc.segments, rng(), {}, &centers[tr.start]);
      const Polyline line = integrate(c, mc.refine);
      std::set<std::size_t> hit;
      for (const GroupPoint& y : line.x) {
        if (abs(y[0]) > reach) continue;
        auto first = std::lower_bound(ts.begin(), ts.end(), y[1] - reach);
        auto last = std::upper_bound(ts.begin(), ts.end(), y[1] + reach);
        for (auto it = first; it != last; ++it) {
          const std::size_t j = it - ts.begin();
          if (hit.count(j)) continue;
          if (distance(centers[j], y, p).compare(mc.tol) <= 0) hit.insert(j);
        }
      }
      tr.hit.assign(hit.begin(), hit.end());
    }
  });

  std::size_t max_count = 0, multiple = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const Trial& tr = trials[i];
    max_count = std::max(max_count, tr.hit.size());
    if (tr.hit.size() > 1) {
      ++multiple;
      if (r.witnesses.size() < opt.max_witnesses) {
        Json params = Json::array();
        for (std::size_t j : tr.hit) params.push_back(to_string(ts[j]));
        r.witnesses.push_back({{"trial", i}, {"seed", tr.seed}, {"start", to_string(ts[tr.start])}, {"approached", params}});
      }
    }
  }
  r.counts["centers"] = n;
  r.counts["max_clusters"] = max_count;
  r.counts["trials_with_multiple"] = multiple;
  r.counts["min_center_distance"] = min_dist ? min_dist->approx() : 0.0;
  r.counts["tolerance_dominated"] = dominated;
  r.pass = dominated || max_count <= 1;
  r.wall_ms = clock.ms();
  return r;
}

Matrix2 orthogonal_transport(const AlgebraVector& e) {
  if (!is_horizontal(e)) throw Error(ErrorCode::invalid_argument, "direction must be horizontal");
  if (e[0] * e[0] + e[1] * e[1] != 1)
    throw Error(ErrorCode::invalid_argument, "direction must have unit length (orthogonal transport only)");
  return {e[1], e[0], -e[0], e[1]};
}

AlgebraVector rational_unit_direction(const AlgebraVector& e, double* deviation) {
  if (!is_horizontal(e)) throw Error(ErrorCode::invalid_argument, "direction must be horizontal");
  if (deviation) *deviation = 0;
  if (e[0] * e[0] + e[1] * e[1] == 1) return e;
  const double a = to_double(e[0]), b = to_double(e[1]);
  if (a == 0 && b == 0) throw Error(ErrorCode::domain, "direction must be nonzero");
  // rational point (1 - t^2, 2t) / (1 + t^2) with t = tan(theta / 2); flip through the origin when a < 0
  const double sgn = a < 0 ? -1 : 1;
  const Scalar t(std::tan(std::atan2(sgn * b, sgn * a) / 2));
  const Scalar d = 1 + t * t;
  const Scalar c = Scalar(sgn) * (1 - t * t) / d, s = Scalar(sgn) * 2 * t / d;
  if (deviation) {
    const double r = std::hypot(a, b);
    *deviation = std::hypot(to_double(c) - a / r, to_double(s) - b / r);
  }
  return horizontal(e.group(), c, s);
}

ExperimentReport transport_experiment(const GroupDescriptor& g, const AlgebraVector& e_in, unsigned k, const MetricParams& p,
                                      std::uint64_t seed, const RunOptions& opt) {
  if (k < 2) throw Error(ErrorCode::domain, "transport needs depth >= 2");
  require_same_group(g, e_in.group());
  p.validate();
  Stopwatch clock;
  ExperimentReport r;
  r.name = "transport";
  r.params = base_params(g, p);
  r.params["depth"] = k;
  r.params["direction"] = {to_string(e_in[0]), to_string(e_in[1])};
  r.params["seed"] = seed;

  double deviation = 0;
  const AlgebraVector e = rational_unit_direction(e_in, &deviation);
  if (e != e_in) {
    r.counts["direction_used"] = {to_string(e[0]), to_string(e[1])};
    r.counts["direction_deviation"] = deviation;
  }
  r.counts["direction_status"] = e == e_in ? "exact" : "rational-approximation";
  const Matrix2 L = orthogonal_transport(e);
  const Automorphism psi = Automorphism::from_horizontal(L, g);
  const Automorphism psi_inv = psi.inverse();
  std::mt19937_64 rng(seed);

  // automorphism invariants
  std::size_t hom_fail = 0, dil_fail = 0;
  constexpr std::size_t kPairs = 100;
  for (std::size_t i = 0; i < kPairs; ++i) {
    const GroupPoint x = random_point(g, rng), y = random_point(g, rng);
    if (psi.apply(x * y) != psi.apply(x) * psi.apply(y)) {
      ++hom_fail;
      if (r.witnesses.size() < opt.max_witnesses)
        r.witnesses.push_back({{"check", "homomorphism"}, {"x", point_json(x)}, {"y", point_json(y)}});
    }
    const Scalar lambda = random_grid(rng, frac(1, 16), 4, 16);
    if (psi.apply(dilate(lambda, x)) != dilate(lambda, psi.apply(x))) ++dil_fail;
  }
  Json inv = {{"preserves_brackets", psi.preserves_brackets()},
              {"preserves_grading", psi.preserves_grading()},
              {"homomorphism_pairs", kPairs},
              {"homomorphism_failures", hom_fail},
              {"dilation_failures", dil_fail}};
  const bool inv_ok = psi.preserves_brackets() && psi.preserves_grading() && hom_fail == 0 && dil_fail == 0;

  // (a) Pansu quotient of psi(gamma) at plateau interiors
  const CurveIterate curve(k, p.eps3, g);
  const GroupPoint target = exp_c2(e);
  std::size_t pansu_checked = 0, pansu_fail = 0;
  for (const Interval& iv : curve.level().intervals) {
    const Scalar t = iv.center();
    Scalar s = frac(1, 2);
    while (t + s > iv.b) s /= 2;
    const GroupPoint q = pansu_quotient([&](const Scalar& u) { return psi.apply(curve(u)); }, t, s);
    ++pansu_checked;
    if (q != target || log_c2(q) != e) {
      ++pansu_fail;
      if (r.witnesses.size() < opt.max_witnesses)
        r.witnesses.push_back({{"check", "pansu"}, {"t", to_string(t)}, {"s", to_string(s)}, {"quotient", point_json(q)}});
    }
  }
  Json pansu = {{"checked", pansu_checked}, {"failures", pansu_fail}, {"limit", scalars_json(e.coords())}};

  // (b) certificate on preimages of the transported points
  const auto pts = certificate_points(curve);
  std::vector<GroupPoint> moved;
  for (const CurveSample& c : pts) moved.push_back(psi.apply(c.x));
  PairScan s = scan_pairs(pts, opt, [&](std::size_t i, std::size_t j, std::optional<GroupPoint>& w) {
    w = psi_inv.apply(inverse(moved[i]) * moved[j]);
    return *w == inverse(pts[i].x) * pts[j].x;
  });
  Json cert = Json::object();
  write_scan(s, pts, cert);
  cert["preimage_mismatches"] = s.mismatches;
  for (auto& w : s.witnesses)
    if (r.witnesses.size() < opt.max_witnesses) r.witnesses.push_back({{"check", "certificate"}, {"pair", std::move(w)}});
  const ExperimentReport plain = intersection_certificate(g, k, p, opt);
  const bool cert_ok = s.violations == 0 && s.mismatches == 0;
  cert["agrees_with_axis_certificate"] = plain.pass == cert_ok;

  // (c) Lipschitz constant of psi from sampled points
  constexpr std::size_t kSamples = 200;
  double lip = 0, co_lip = INFINITY;
  std::size_t isometric = 0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    GroupPoint x = random_point(g, rng);
    const NormValue a = box_norm(x, p), b = box_norm(psi.apply(x), p);
    if (a.is_zero()) continue;
    if (a == b) ++isometric;
    const double ratio = std::pow(to_double(b.sixth_power() / a.sixth_power()), 1.0 / 6);
    lip = std::max(lip, ratio);
    co_lip = std::min(co_lip, ratio);
  }
  Json lipschitz = {{"samples", kSamples}, {"max_ratio", lip}, {"min_ratio", co_lip}, {"exact_isometries", isometric}};
  const bool lip_ok = std::isfinite(lip) && lip > 0;

  r.counts["invariants"] = inv;
  r.counts["pansu"] = pansu;
  r.counts["certificate"] = cert;
  r.counts["lipschitz"] = lipschitz;
  r.pass = inv_ok && pansu_fail == 0 && cert_ok && plain.pass == cert_ok && lip_ok;
  r.wall_ms = clock.ms();
  return r;
}

ExperimentReport reach_experiment(const GroupDescriptor& g, const ReachParams& rp, const RunOptions& opt) {
  if (rp.sigmas.empty()) throw Error(ErrorCode::invalid_argument, "need at least one sigma");
  if (rp.trials == 0) throw Error(ErrorCode::invalid_argument, "need at least one trial");
  Stopwatch clock;
  ExperimentReport r;
  r.name = "reach";
  r.params = {{"group", group_tag(g)}, {"sigmas", scalars_json(rp.sigmas)}, {"segments", rp.segments},
              {"trials", rp.trials}, {"seed", rp.seed}};
  std::vector<ConeSpec> cones;
  for (const Scalar& s : rp.sigmas) cones.emplace_back(x2_axis(g), s);

  struct Part {
    std::size_t points = 0, violations = 0, boundary = 0;
    Scalar speed2 = 0;
    Json witnesses = Json::array();
  };
  const std::size_t blocks = 64;
  std::vector<Part> part(blocks);
  parallel_blocks(rp.trials, blocks, opt.workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    Part& s = part[b];
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t seed = derive_seed(rp.seed, i);
      const ConeSpec& cone = cones[i % cones.size()];
      const ControlCurve c = sample_cone_curve(cone, rp.segments, seed);
      s.speed2 = std::max<Scalar>(s.speed2, c.max_speed_squared());
      GroupPoint x = c.start;
      for (std::size_t seg = 0; seg < c.segments(); ++seg) {
        x = flow_constant(x, c.controls[seg], c.breakpoints[seg + 1] - c.breakpoints[seg]);
        ++s.points;
        const std::vector<Scalar> terms = semigroup_closure_terms(x);
        const Scalar lowest = *std::min_element(terms.begin(), terms.end());
        if (lowest == 0) ++s.boundary;
        if (lowest < 0) {
          ++s.violations;
          if (s.witnesses.size() < opt.max_witnesses)
            s.witnesses.push_back({{"trial", i}, {"seed", seed}, {"sigma", to_string(cone.sigma())},
                                   {"segment", seg}, {"x", point_json(x)}, {"terms", scalars_json(terms)}});
        }
      }
    }
  });
  std::size_t points = 0, violations = 0, boundary = 0;
  Scalar speed2 = 0;
  for (Part& s : part) {
    points += s.points;
    violations += s.violations;
    boundary += s.boundary;
    speed2 = std::max<Scalar>(speed2, s.speed2);
    for (auto& w : s.witnesses)
      if (r.witnesses.size() < opt.max_witnesses) r.witnesses.push_back(std::move(w));
  }
  r.counts = {{"flows", rp.trials}, {"points", points}, {"violations", violations},
              {"boundary_points", boundary}, {"lipschitz_constant", std::sqrt(to_double(speed2))}};
  r.pass = violations == 0;
  r.wall_ms = clock.ms();
  return r;
}

ExperimentReport curve_verify_experiment(const GroupDescriptor& g, unsigned k, const MetricParams& p,
                                         const RunOptions& opt) {
  Stopwatch clock;
  const CurveReport cr = verify_iterate(k, p, opt.workers, g);
  ExperimentReport r;
  r.name = "curve-verify";
  r.params = base_params(g, p);
  r.params["depth"] = k;
  r.counts = {{"checks", curve_report_counts(cr)}, {"violations", cr.violations.size()}};
  r.witnesses = curve_report_witnesses(cr, opt.max_witnesses);
  r.pass = cr.pass();
  r.wall_ms = clock.ms();
  return r;
}

ExperimentReport engel_experiment(unsigned k, const MetricParams& p, std::uint64_t seed, const RunOptions& opt) {
  const GroupDescriptor& g = GroupDescriptor::engel();
  Stopwatch clock;
  ExperimentReport r;
  r.name = "engel";
  r.params = base_params(g, p);
  r.params["depth"] = k;
  r.params["seed"] = seed;

  const ExperimentReport verify = curve_verify_experiment(g, k, p, opt);
  ReachParams rp;
  rp.seed = seed;
  const ExperimentReport reach = reach_experiment(g, rp, opt);
  const ExperimentReport cert = intersection_certificate(g, k, p, opt);

  std::string rejection;
  bool rejected = false;
  try {
    Automorphism::from_horizontal(orthogonal_transport(horizontal(g, frac(3, 5), frac(4, 5))), g);
  } catch (const Error& err) {
    rejected = err.code() == ErrorCode::unsupported;
    rejection = err.what();
  }

  r.counts = {{"verify", {{"pass", verify.pass}, {"checks", verify.counts["checks"]}}},
              {"reach", {{"pass", reach.pass}, {"flows", reach.counts["flows"]}, {"violations", reach.counts["violations"]}}},
              {"certificate", {{"pass", cert.pass}, {"pairs", cert.counts["pairs"]}, {"violations", cert.counts["violations"]}}},
              {"off_axis_transport", {{"rejected", rejected}, {"reason", rejection}}}};
  for (const auto* sub : {&verify, &reach, &cert})
    for (const auto& w : sub->witnesses)
      if (r.witnesses.size() < opt.max_witnesses) r.witnesses.push_back({{"experiment", sub->name}, {"witness", w}});
  r.pass = verify.pass && reach.pass && cert.pass && rejected;
  r.wall_ms = clock.ms();
  return r;
}

ExperimentReport calibrate_experiment(const GroupDescriptor& g, const MetricParams& p, std::size_t trials,
                                      std::uint64_t seed, const RunOptions& opt) {
  Stopwatch clock;
  const CalibrationReport c = calibrate(g, p, trials, seed, opt.workers, std::min<std::size_t>(opt.max_witnesses, 5));
  ExperimentReport r;
  r.name = "calibrate";
  r.params = base_params(g, p);
  r.params["trials"] = trials;
  r.params["seed"] = seed;
  r.counts = {{"trials", c.trials}, {"max_quotient", c.max_quotient}, {"violations", c.violations}};
  for (const CalibrationWitness& w : c.worst)
    r.witnesses.push_back({{"x", scalars_json(w.x)}, {"y", scalars_json(w.y)}, {"z", scalars_json(w.z)}, {"quotient", w.quotient}});
  r.pass = c.violations == 0;
  r.wall_ms = clock.ms();
  return r;
}

Json curve_json(unsigned k, const Scalar& eps3) {
  if (eps3 <= 0) throw Error(ErrorCode::domain, "eps3 must be positive");
  Json levels = Json::array();
  for (const CantorLevel& lvl : build_levels(k)) {
    Json iv = Json::array(), om = Json::array();
    for (std::size_t j = 0; j < lvl.intervals.size(); ++j) {
      iv.push_back({to_string(lvl.intervals[j].a), to_string(lvl.intervals[j].b)});
      om.push_back(to_string(omega(lvl.k, j + 1, eps3)));
    }
    levels.push_back({{"k", lvl.k}, {"intervals", iv}, {"omega", om}});
  }
  return {{"depth", k}, {"eps3", to_string(eps3)}, {"levels", levels}};
}

std::string curve_csv(unsigned k, const Scalar& eps3, const GroupDescriptor& g) {
  if (k == 0) throw Error(ErrorCode::domain, "depth must be >= 1");
  std::ostringstream out;
  out << "level,index,t";
  for (std::size_t i = 1; i <= g.dimension(); ++i) out << ",x" << i;
  out << '\n';
  for (unsigned lvl = 1; lvl <= k; ++lvl) {
    const CurveIterate c(lvl, eps3, g);
    const auto& iv = c.level().intervals;
    for (std::size_t j = 0; j < iv.size(); ++j)
      for (const Scalar& t : {iv[j].a, iv[j].b}) {
        out << lvl << ',' << j << ',' << to_string(t);
        const GroupPoint x = c(t);
        for (const Scalar& v : x.coords()) out << ',' << to_string(v);
        out << '\n';
      }
  }
  return out.str();
}

}  // namespace carnot
