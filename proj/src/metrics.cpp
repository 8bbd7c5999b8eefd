#include "drivebench/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace drivebench::metrics {

namespace {

// Shared log-domain accumulator: sum of count * ln(alpha * base) over types.
double log_penalty_sum(const sim::InfractionLedger& ledger, const PenaltyTable& table) {
  double sum = 0.0;
  for (std::size_t t = 0; t < sim::kInfractionCount; ++t) {
    const int count = ledger.counts[t];
    if (count > 0)
      sum += static_cast<double>(count) * std::log(table.factor(static_cast<sim::Infraction>(t)));
  }
  return sum;
}

}  // namespace

double infraction_score(const sim::InfractionLedger& ledger, const PenaltyTable& table) {
  return std::exp(log_penalty_sum(ledger, table));
}

double infraction_coefficient(const sim::InfractionLedger& ledger, const PenaltyTable& table) {
  if (ledger.total() == 0) return 1.0;
  if (!(ledger.distance_km > 0.0))
    throw std::invalid_argument("infraction_coefficient: distance must be positive");
  return std::exp(log_penalty_sum(ledger, table) / ledger.distance_km);
}

double expected_ds(double x, double coefficient, double length_km) {
  return 100.0 * x * std::pow(coefficient, x * length_km);
}

OptimalStop x_opt(double coefficient, double length_km) {
  if (coefficient >= 1.0) return {1.0, expected_ds(1.0, coefficient, length_km)};
  const double log_i = std::log(coefficient);
  const double interior = -1.0 / (length_km * log_i);
  if (interior >= 1.0) return {1.0, expected_ds(1.0, coefficient, length_km)};
  return {interior, -100.0 / (length_km * std::numbers::e * log_i)};
}

double normalized_ds(double x, double coefficient) { return 100.0 * x * coefficient; }

bool early_termination_policy(double distance_km, double cutoff_km) {
  return distance_km >= cutoff_km;
}

RouteScore score_route(const sim::InfractionLedger& ledger, const PenaltyTable& table) {
  RouteScore score;
  score.rc = 100.0 * ledger.route_fraction;
  score.is = infraction_score(ledger, table);
  score.ds = score.rc * score.is;
  score.coefficient = infraction_coefficient(ledger, table);
  score.ds_hat = score.rc * score.coefficient;
  return score;
}

Summary aggregate(const std::vector<sim::InfractionLedger>& ledgers, const PenaltyTable& table) {
  if (ledgers.empty()) throw std::invalid_argument("aggregate: no routes");
  Summary summary;
  summary.routes = ledgers.size();
  summary.mean = RouteScore{0.0, 0.0, 0.0, 0.0, 0.0};
  std::array<double, sim::kInfractionCount> totals{};
  double total_km = 0.0;
  for (const auto& ledger : ledgers) {
    const RouteScore score = score_route(ledger, table);
    summary.mean.rc += score.rc;
    summary.mean.is += score.is;
    summary.mean.ds += score.ds;
    summary.mean.coefficient += score.coefficient;
    summary.mean.ds_hat += score.ds_hat;
    for (std::size_t t = 0; t < sim::kInfractionCount; ++t)
      totals[t] += static_cast<double>(ledger.counts[t]);
    total_km += ledger.distance_km;
  }
  const auto n = static_cast<double>(summary.routes);
  summary.mean.rc /= n;
  summary.mean.is /= n;
  summary.mean.ds /= n;
  summary.mean.coefficient /= n;
  summary.mean.ds_hat /= n;
  if (total_km > 0.0)
    for (std::size_t t = 0; t < sim::kInfractionCount; ++t)
      summary.rate_per_km[t] = totals[t] / total_km;
  return summary;
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMarginLeft = 56;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 24;
constexpr int kMarginBottom = 44;
constexpr int kSamples = 400;

double plot_x(double x) {
  return kMarginLeft + x * (kWidth - kMarginLeft - kMarginRight);
}

double plot_y(double score) {
  return kHeight - kMarginBottom - (score / 100.0) * (kHeight - kMarginTop - kMarginBottom);
}

void append_polyline(std::string& out, double coefficient, double length_km, bool normalized,
                     const char* color) {
  out += "  <polyline fill=\"none\" stroke=\"";
  out += color;
  out += "\" stroke-width=\"2\" points=\"";
  char buffer[64];
  for (int i = 0; i <= kSamples; ++i) {
    const double x = static_cast<double>(i) / kSamples;
    const double score =
        normalized ? normalized_ds(x, coefficient) : expected_ds(x, coefficient, length_km);
    std::snprintf(buffer, sizeof buffer, "%.2f,%.2f ", plot_x(x), plot_y(score));
    out += buffer;
  }
  out += "\"/>\n";
}

}  // namespace

void write_ds_curves_svg(std::ostream& out, double coefficient, double length_km) {
  const OptimalStop best = x_opt(coefficient, length_km);
  std::string svg;
  char buffer[256];
  std::snprintf(buffer, sizeof buffer,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                kWidth, kHeight, kWidth, kHeight);
  svg += buffer;
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // Axes with score gridlines every 20 points.
  for (int score = 0; score <= 100; score += 20) {
    std::snprintf(buffer, sizeof buffer,
                  "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#dddddd\"/>\n",
                  plot_x(0.0), plot_y(score), plot_x(1.0), plot_y(score));
    svg += buffer;
    std::snprintf(buffer, sizeof buffer,
                  "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"end\" "
                  "fill=\"#444444\">%d</text>\n",
                  plot_x(0.0) - 6.0, plot_y(score) + 4.0, score);
    svg += buffer;
  }
  for (int tick = 0; tick <= 10; ++tick) {
    const double x = tick / 10.0;
    std::snprintf(buffer, sizeof buffer,
                  "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\" "
                  "fill=\"#444444\">%.1f</text>\n",
                  plot_x(x), kHeight - kMarginBottom + 18.0, x);
    svg += buffer;
  }
  std::snprintf(buffer, sizeof buffer,
                "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#222222\"/>\n",
                plot_x(0.0), plot_y(0.0), plot_x(1.0), plot_y(0.0));
  svg += buffer;
  std::snprintf(buffer, sizeof buffer,
                "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#222222\"/>\n",
                plot_x(0.0), plot_y(0.0), plot_x(0.0), plot_y(100.0));
  svg += buffer;
  append_polyline(svg, coefficient, length_km, false, "#1f77b4");
  append_polyline(svg, coefficient, length_km, true, "#d62728");
  // Dashed marker at the analytic optimum of the expected score.
  std::snprintf(buffer, sizeof buffer,
                "  <line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f77b4\" "
                "stroke-dasharray=\"4 3\"/>\n",
                plot_x(best.x), plot_y(0.0), plot_x(best.x), plot_y(best.ds));
  svg += buffer;
  std::snprintf(buffer, sizeof buffer,
                "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" fill=\"#1f77b4\">x_max = %.4f, "
                "DS = %.2f</text>\n",
                plot_x(best.x) + 6.0, plot_y(best.ds) - 6.0, best.x, best.ds);
  svg += buffer;
  std::snprintf(buffer, sizeof buffer,
                "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" fill=\"#1f77b4\">expected DS, I = "
                "%.4g, L = %.4g km</text>\n",
                plot_x(0.05), plot_y(100.0) + 16.0, coefficient, length_km);
  svg += buffer;
  std::snprintf(buffer, sizeof buffer,
                "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"13\" fill=\"#d62728\">normalized DS "
                "(100 x I)</text>\n",
                plot_x(0.05), plot_y(100.0) + 32.0);
  svg += buffer;
  std::snprintf(buffer, sizeof buffer,
                "  <text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" text-anchor=\"middle\" "
                "fill=\"#444444\">stop fraction x</text>\n",
                plot_x(0.5), kHeight - 8.0);
  svg += buffer;
  svg += "</svg>\n";
  out << svg;
}

}  // namespace drivebench::metrics
