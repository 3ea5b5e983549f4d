#include "mop/weights.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "mop/error.hpp"
#include "mop/linalg.hpp"
#include "mop/quadrature.hpp"
#include "mop/special_functions.hpp"

namespace mop::weights {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, ErrorCode code, const char* what) {
  if (!ok) throw Error(code, what);
}

// Fritsch-Carlson slopes for a monotone piecewise-cubic Hermite interpolant.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / (x[1] - x[0]);
    return d;
  }
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) return 3.0 * d0;
    return s;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double t) {
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  if (i + 1 >= x.size()) i = x.size() - 2;
  const double h = x[i + 1] - x[i];
  const double s = (t - x[i]) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

SignedLog from_log(double log_abs) { return {1, log_abs}; }

// The three two-matrix inner integrals at x, in log form. Nodes come in +-y
// pairs summed pairwise so that w_j(-x) = (-1)^j w_j(x) holds bit for bit when
// V is even.
std::vector<SignedLog> two_matrix_log_weights(const TwoMatrixParams& p, int n, double x) {
  const double nn = static_cast<double>(n);
  const double y_max = std::pow(64.0 * std::numbers::ln10, 0.25) + 2.0 * std::cbrt(std::abs(p.tau * x));
  const double max_width = p.quadrature.panel_width / std::sqrt(nn);
  const int panels = std::max(4, static_cast<int>(std::ceil(y_max / max_width)));
  const numerics::QuadratureRule ref = numerics::gauss_legendre(p.quadrature.nodes_per_panel, -1.0, 1.0);
  const double width = y_max / panels;

  const std::size_t count = static_cast<std::size_t>(panels) * ref.size();
  std::vector<double> ys, ws, ep, em;
  ys.reserve(count);
  ws.reserve(count);
  ep.reserve(count);
  em.reserve(count);
  double emax = -kInf;
  for (int k = 0; k < panels; ++k) {
    const double c = (k + 0.5) * width;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      const double y = c + 0.5 * width * ref.nodes[i];
      const double quartic = 0.25 * y * y * y * y;
      const double cross = p.tau * x * y;
      const double e_plus = nn * (cross - quartic);
      const double e_minus = nn * (-cross - quartic);
      ys.push_back(y);
      ws.push_back(0.5 * width * ref.weights[i]);
      ep.push_back(e_plus);
      em.push_back(e_minus);
      emax = std::max(emax, std::max(e_plus, e_minus));
    }
  }
  double s[3] = {0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double y = ys[i];
    const double fp = std::exp(ep[i] - emax);
    const double fm = std::exp(em[i] - emax);
    const double a0 = fp, b0 = fm;
    const double a1 = y * fp, b1 = -y * fm;
    const double a2 = y * y * fp, b2 = y * y * fm;
    s[0] += ws[i] * (a0 + b0);
    s[1] += ws[i] * (a1 + b1);
    s[2] += ws[i] * (a2 + b2);
  }
  const double base = -nn * p.V(x) + emax;
  std::vector<SignedLog> out(3);
  for (int j = 0; j < 3; ++j) {
    if (s[j] == 0.0)
      out[j] = {0, -kInf};
    else
      out[j] = {s[j] > 0.0 ? 1 : -1, base + std::log(std::abs(s[j]))};
  }
  return out;
}

}  // namespace

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::multiple_hermite: return "multiple-hermite";
    case WeightKind::external_source: return "external-source";
    case WeightKind::squared_bessel_pair: return "squared-bessel-pair";
    case WeightKind::two_matrix_induced: return "two-matrix-induced";
    case WeightKind::tabulated: return "tabulated";
  }
  return "unknown";
}

double SignedLog::value() const noexcept {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

bool Support::contains(double x) const noexcept {
  const bool above = open_lo ? x > lo : x >= lo;
  const bool below = open_hi ? x < hi : x <= hi;
  return above && below;
}

WeightFamily WeightFamily::multiple_hermite(int n, double t, double T, std::vector<double> a) {
  require(n >= 1, ErrorCode::invalid_argument, "scale n must be positive");
  require(!a.empty(), ErrorCode::invalid_argument, "need at least one weight");
  require(t > 0.0 && t < T, ErrorCode::invalid_argument, "need 0 < t < T");
  const int r = static_cast<int>(a.size());
  return {WeightKind::multiple_hermite, n, r, MultipleHermiteParams{t, T, std::move(a)}};
}

WeightFamily WeightFamily::external_source(int n, Polynomial V, std::vector<double> a) {
  require(n >= 1, ErrorCode::invalid_argument, "scale n must be positive");
  require(!a.empty(), ErrorCode::invalid_argument, "need at least one weight");
  require(V.is_confining(), ErrorCode::non_confining_potential,
          "V must have even degree >= 2 and a positive leading coefficient");
  const int r = static_cast<int>(a.size());
  return {WeightKind::external_source, n, r, ExternalSourceParams{std::move(V), std::move(a)}};
}

WeightFamily WeightFamily::squared_bessel_pair(int n, double alpha, double a, double t, double T) {
  require(n >= 1, ErrorCode::invalid_argument, "scale n must be positive");
  require(alpha > -1.0, ErrorCode::invalid_order, "squared Bessel needs alpha > -1");
  require(a > 0.0, ErrorCode::invalid_argument, "squared Bessel needs a > 0");
  require(t > 0.0 && t < T, ErrorCode::invalid_argument, "need 0 < t < T");
  return {WeightKind::squared_bessel_pair, n, 2, SquaredBesselPairParams{alpha, a, t, T}};
}

WeightFamily WeightFamily::two_matrix_induced(int n, Polynomial V, double tau,
                                              TwoMatrixQuadrature quadrature) {
  require(n >= 1, ErrorCode::invalid_argument, "scale n must be positive");
  require(tau != 0.0 && std::isfinite(tau), ErrorCode::invalid_argument, "tau must be nonzero");
  require(V.is_confining(), ErrorCode::non_confining_potential,
          "V must have even degree >= 2 and a positive leading coefficient");
  require(quadrature.nodes_per_panel >= 2 && quadrature.panel_width > 0.0,
          ErrorCode::invalid_argument, "invalid inner quadrature settings");
  return {WeightKind::two_matrix_induced, n, 3, TwoMatrixParams{std::move(V), tau, quadrature}};
}

WeightFamily WeightFamily::tabulated(int n, std::vector<double> x,
                                     std::vector<std::vector<double>> values) {
  require(n >= 1, ErrorCode::invalid_argument, "scale n must be positive");
  require(x.size() >= 2, ErrorCode::invalid_argument, "tabulated weights need >= 2 samples");
  require(!values.empty(), ErrorCode::invalid_argument, "tabulated weights need >= 1 column");
  for (std::size_t i = 1; i < x.size(); ++i)
    require(x[i] > x[i - 1], ErrorCode::non_sorted_input, "tabulated x must be strictly increasing");
  TabulatedParams p;
  for (const auto& column : values) {
    require(column.size() == x.size(), ErrorCode::invalid_argument, "column length mismatch");
    std::vector<double> lv(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
      require(column[i] > 0.0 && std::isfinite(column[i]), ErrorCode::invalid_argument,
              "tabulated weights must be positive and finite");
      lv[i] = std::log(column[i]);
    }
    p.log_slopes.push_back(pchip_slopes(x, lv));
    p.log_values.push_back(std::move(lv));
  }
  const int r = static_cast<int>(values.size());
  p.x = std::move(x);
  p.values = std::move(values);
  return {WeightKind::tabulated, n, r, std::move(p)};
}

WeightFamily WeightFamily::tabulated_from_csv(int n, std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::io_error, "empty weight CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  require(header.size() >= 2 && header[0] == "x", ErrorCode::io_error,
          "weight CSV header must be x,w1,...,wr");
  for (std::size_t j = 1; j < header.size(); ++j)
    require(header[j] == "w" + std::to_string(j), ErrorCode::io_error,
            "weight CSV header must be x,w1,...,wr");
  const std::size_t r = header.size() - 1;
  std::vector<double> x;
  std::vector<std::vector<double>> values(r);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        require(used == cell.size(), ErrorCode::io_error, "malformed number in weight CSV");
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::io_error, "malformed number in weight CSV: " + cell);
      }
    }
    require(row.size() == r + 1, ErrorCode::io_error, "wrong column count in weight CSV");
    x.push_back(row[0]);
    for (std::size_t j = 0; j < r; ++j) values[j].push_back(row[j + 1]);
  }
  return tabulated(n, std::move(x), std::move(values));
}

Support WeightFamily::support() const noexcept {
  switch (kind_) {
    case WeightKind::squared_bessel_pair: return {0.0, kInf, true, true};
    case WeightKind::tabulated: {
      const auto& p = std::get<TabulatedParams>(params_);
      return {p.x.front(), p.x.back(), false, false};
    }
    default: return {-kInf, kInf, true, true};
  }
}

void WeightFamily::check_index(int j) const {
  if (j < 0 || j >= r_) throw Error(ErrorCode::out_of_range, "weight index out of range");
}

void WeightFamily::check_support(double x) const {
  if (!support().contains(x) || std::isnan(x))
    throw Error(ErrorCode::out_of_support, "x = " + std::to_string(x) + " is outside the support");
}

std::vector<SignedLog> WeightFamily::log_weights(double x) const {
  check_support(x);
  const double n = static_cast<double>(n_);
  return std::visit(
      overloaded{
          [&](const MultipleHermiteParams& p) {
            std::vector<SignedLog> out;
            const double quad = -p.T * x * x / (2.0 * p.t * (p.T - p.t));
            for (double a : p.a) out.push_back(from_log(n * (quad + a * x / p.t)));
            return out;
          },
          [&](const ExternalSourceParams& p) {
            std::vector<SignedLog> out;
            const double v = p.V(x);
            for (double a : p.a) out.push_back(from_log(-n * (v - a * x)));
            return out;
          },
          [&](const SquaredBesselPairParams& p) {
            const double c = p.T / (2.0 * p.t * (p.T - p.t));
            const double arg = std::sqrt(p.a * x) / p.t;
            const double lx = std::log(x);
            return std::vector<SignedLog>{
                from_log(0.5 * p.alpha * lx - c * x + numerics::log_bessel_i(p.alpha, arg)),
                from_log(0.5 * (p.alpha + 1.0) * lx - c * x + numerics::log_bessel_i(p.alpha + 1.0, arg))};
          },
          [&](const TwoMatrixParams& p) { return two_matrix_log_weights(p, n_, x); },
          [&](const TabulatedParams& p) {
            std::vector<SignedLog> out;
            for (std::size_t j = 0; j < p.log_values.size(); ++j)
              out.push_back(from_log(pchip_eval(p.x, p.log_values[j], p.log_slopes[j], x)));
            return out;
          },
      },
      params_);
}

SignedLog WeightFamily::log_weight(int j, double x) const {
  check_index(j);
  if (kind_ == WeightKind::two_matrix_induced) return log_weights(x)[static_cast<std::size_t>(j)];
  check_support(x);
  const double n = static_cast<double>(n_);
  return std::visit(
      overloaded{
          [&](const MultipleHermiteParams& p) {
            return from_log(n * (-p.T * x * x / (2.0 * p.t * (p.T - p.t)) + p.a[j] * x / p.t));
          },
          [&](const ExternalSourceParams& p) { return from_log(-n * (p.V(x) - p.a[j] * x)); },
          [&](const TabulatedParams& p) {
            return from_log(pchip_eval(p.x, p.log_values[j], p.log_slopes[j], x));
          },
          [&](const auto&) { return log_weights(x)[static_cast<std::size_t>(j)]; },
      },
      params_);
}

std::vector<int> WeightFamily::default_multi_index(int total) const {
  require(total >= 0, ErrorCode::invalid_argument, "multi-index total must be >= 0");
  // n = p r + q: the first q entries get p + 1, the rest p.
  std::vector<int> nu(static_cast<std::size_t>(r_), total / r_);
  for (int j = 0; j < total % r_; ++j) ++nu[static_cast<std::size_t>(j)];
  return nu;
}

double eval_weight(const WeightFamily& family, int j, double x) {
  return family.log_weight(j, x).value();
}

TransitionKind TransitionKind::squared_bessel(double alpha) {
  require(alpha > -1.0, ErrorCode::invalid_order, "squared Bessel needs alpha > -1");
  return {Type::squared_bessel, alpha};
}

double log_transition_density(const TransitionKind& kind, double t, double x, double y) {
  require(t > 0.0, ErrorCode::domain_error, "transition density needs t > 0");
  if (kind.type == TransitionKind::Type::brownian) {
    const double d = x - y;
    return -0.5 * std::log(2.0 * std::numbers::pi * t) - d * d / (2.0 * t);
  }
  require(x > 0.0 && y > 0.0, ErrorCode::domain_error, "squared Bessel density needs x, y > 0");
  return -std::log(2.0 * t) + 0.5 * kind.alpha * (std::log(y) - std::log(x)) - (x + y) / (2.0 * t) +
         numerics::log_bessel_i(kind.alpha, std::sqrt(x * y) / t);
}

double transition_density(const TransitionKind& kind, double t, double x, double y) {
  return std::exp(log_transition_density(kind, t, x, y));
}

double kmg_density(const TransitionKind& kind, double t, double T, std::span<const double> a,
                   std::span<const double> b, std::span<const double> x) {
  require(t > 0.0 && t < T, ErrorCode::domain_error, "need 0 < t < T");
  const std::size_t n = x.size();
  require(a.size() == n && b.size() == n && n >= 1, ErrorCode::invalid_argument,
          "a, b and x must have the same positive length");
  auto sorted = [](std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] < v[i - 1]) return false;
    return true;
  };
  require(sorted(a) && sorted(b) && sorted(x), ErrorCode::non_sorted_input,
          "a, b and x must be increasing");
  const auto en = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd start(en, en), end(en, en);
  for (Eigen::Index j = 0; j < en; ++j)
    for (Eigen::Index k = 0; k < en; ++k) {
      start(j, k) = transition_density(kind, t, a[j], x[k]);
      end(k, j) = transition_density(kind, T - t, x[k], b[j]);
    }
  return numerics::determinant(start) * numerics::determinant(end);
}

}  // namespace mop::weights
