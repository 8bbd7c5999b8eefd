#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "drivebench/ledger.hpp"

namespace drivebench::metrics {

/// Multiplicative penalty factors per infraction type. alpha rescales every
/// base factor; at 0.2 a single pedestrian collision costs 0.2 * 0.5 = 0.1.
struct PenaltyTable {
  std::array<double, sim::kInfractionCount> base{0.5, 0.6, 0.65, 0.7, 0.7, 0.7, 0.8};
  double alpha{1.0};

  double factor(sim::Infraction type) const { return alpha * base[static_cast<std::size_t>(type)]; }
};

/// Penalty product over all counted infractions, in (0, 1]. Computed in the
/// log domain so it agrees with the per-km coefficient exponentiation.
double infraction_score(const sim::InfractionLedger& ledger, const PenaltyTable& table = {});

/// Per-km coefficient I with I^distance_km = infraction_score. A clean
/// ledger reads 1 at any distance; otherwise the distance must be positive.
double infraction_coefficient(const sim::InfractionLedger& ledger, const PenaltyTable& table = {});

/// Expected driving score 100 x I^(xL) for a route of length_km stopped at
/// fraction x with coefficient I accruing per km.
double expected_ds(double x, double coefficient, double length_km);

struct OptimalStop {
  double x{1.0};
  double ds{100.0};
};

/// Analytic argmax of expected_ds over x: -1/(L ln I) when that lies inside
/// (0, 1), else the route end. The maximum is interior exactly when
/// I < exp(-1/L).
OptimalStop x_opt(double coefficient, double length_km);

/// Normalized score 100 x I: linear in x, so finishing always scores best.
double normalized_ds(double x, double coefficient);

/// True once the driven distance reaches the cutoff; the run harness then
/// forces target speed 0.
bool early_termination_policy(double distance_km, double cutoff_km);

struct RouteScore {
  double rc{0.0};           // route completion, percent
  double is{1.0};           // infraction score
  double ds{0.0};           // rc * is
  double coefficient{1.0};  // per-km infraction coefficient I
  double ds_hat{0.0};       // rc * I
};

RouteScore score_route(const sim::InfractionLedger& ledger, const PenaltyTable& table = {});

struct Summary {
  std::size_t routes{0};
  RouteScore mean;                                     // arithmetic means per field
  std::array<double, sim::kInfractionCount> rate_per_km{};  // total counts over total km
};

/// Per-route scores averaged field-wise; DS is averaged per route, not
/// recomposed from mean RC and mean IS. Throws on an empty list.
Summary aggregate(const std::vector<sim::InfractionLedger>& ledgers, const PenaltyTable& table = {});

/// Standalone SVG plotting expected_ds and normalized_ds against x, with the
/// analytic optimum marked. Pure function of its arguments.
void write_ds_curves_svg(std::ostream& out, double coefficient, double length_km);

}  // namespace drivebench::metrics
