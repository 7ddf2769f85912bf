#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "carnot/cantor.hpp"
#include "carnot/dynamics.hpp"

namespace carnot {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "1.0";

/// {name, version, params, pass, counts, witnesses[], wall_ms}
struct ExperimentReport {
  std::string name;
  Json params = Json::object();
  bool pass = true;
  Json counts = Json::object();
  Json witnesses = Json::array();
  double wall_ms = 0;

  /// wall_ms is written as 0 when `timing` is false, so reports compare byte for byte.
  Json to_json(bool timing = true) const;
};

struct RunOptions {
  unsigned workers = 0;
  std::size_t max_witnesses = 20;
};

Json point_json(const GroupPoint& x);
Json params_json(const MetricParams& p);

/// For level-k endpoints and centers p = gamma(t0), q = gamma(t), t0 < t in
/// different intervals, asserts that q is not in p * closure.
ExperimentReport intersection_certificate(const GroupDescriptor& g, unsigned k, const MetricParams& p,
                                          const RunOptions& opt = {});

struct MonteCarloParams {
  unsigned depth = 8;
  Scalar sigma{frac(1, 2)};
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  Scalar tol{frac(1, 4096)};
  std::size_t segments = 8;
  unsigned refine = 16;
};

/// Cone curves started at random curve points; counts separated clusters of
/// polyline points within box-norm distance tol of gamma^k.
ExperimentReport monte_carlo_intersections(const GroupDescriptor& g, const MonteCarloParams& mc, const MetricParams& p,
                                           const RunOptions& opt = {});

/// Orthogonal L with L(X2) = e: L(X1) = (e2, -e1).
Matrix2 orthogonal_transport(const AlgebraVector& e);

/// e itself when |e| = 1 exactly; otherwise the rational unit vector
/// ((1 - t^2), 2t) / (1 + t^2) nearest to e / |e| from a double tan(theta/2).
AlgebraVector rational_unit_direction(const AlgebraVector& e, double* deviation = nullptr);

/// Transports gamma^k by the automorphism extending L and re-runs the Pansu,
/// certificate and Lipschitz checks. Non-unit directions are replaced by
/// rational_unit_direction and the report says so.
ExperimentReport transport_experiment(const GroupDescriptor& g, const AlgebraVector& e, unsigned k, const MetricParams& p,
                                      std::uint64_t seed = 1, const RunOptions& opt = {});

struct ReachParams {
  /// trial i uses sigmas[i % size]
  std::vector<Scalar> sigmas{frac(1, 4), frac(1, 2), frac(3, 4)};
  std::size_t segments = 20;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
};

/// Cone-control flows along X2 from the origin; every breakpoint must lie in the closure.
ExperimentReport reach_experiment(const GroupDescriptor& g, const ReachParams& rp, const RunOptions& opt = {});

/// Curve verification, reachability and certificate in engel, plus the
/// rejection of transport off the X2 axis.
ExperimentReport engel_experiment(unsigned k, const MetricParams& p, std::uint64_t seed = 1, const RunOptions& opt = {});

ExperimentReport curve_verify_experiment(const GroupDescriptor& g, unsigned k, const MetricParams& p,
                                         const RunOptions& opt = {});

ExperimentReport calibrate_experiment(const GroupDescriptor& g, const MetricParams& p, std::size_t trials,
                                      std::uint64_t seed, const RunOptions& opt = {});

/// {depth, eps3, levels: [{k, intervals: [[a, b], ...], omega: [...]}]}
Json curve_json(unsigned k, const Scalar& eps3);
/// Rows "level,index,t,x1..xn" for every endpoint of every level.
std::string curve_csv(unsigned k, const Scalar& eps3, const GroupDescriptor& g = GroupDescriptor::f23());

}  // namespace carnot
