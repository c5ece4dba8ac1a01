#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "pickpeak/pick.hpp"

namespace pickpeak {

namespace {

// Parameters: theta, then (u_re, u_im) per zero; the zero is u tanh|u| / |u|.
struct BlaschkeFit {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const PickData* data;
  int degree;
  double scale;

  int inputs() const { return 2 * degree + 1; }
  int values() const { return std::max(2 * static_cast<int>(data->size()), inputs()); }

  static Complex zero_from(double re, double im) {
    const double r = std::hypot(re, im);
    if (r < 1e-300) return {re, im};
    return Complex(re, im) * (std::tanh(r) / r);
  }

  Complex value_at(const Eigen::VectorXd& x, Complex z) const {
    Complex b = std::polar(1.0, x[0]);
    for (int k = 0; k < degree; ++k) {
      const Complex a = zero_from(x[1 + 2 * k], x[2 + 2 * k]);
      b *= (z - a) / (1.0 - std::conj(a) * z);
    }
    return scale * b;
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& fvec) const {
    fvec.setZero(values());
    for (std::size_t j = 0; j < data->size(); ++j) {
      const Complex r = value_at(x, data->nodes()[j]) - data->targets()[j];
      fvec[2 * j] = r.real();
      fvec[2 * j + 1] = r.imag();
    }
    return 0;
  }

  double max_residual(const Eigen::VectorXd& x) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < data->size(); ++j)
      worst = std::max(worst, std::abs(value_at(x, data->nodes()[j]) - data->targets()[j]));
    return worst;
  }
};

class OracleSearch {
 public:
  OracleSearch(const PickData& data, int max_degree, int samples)
      : data_(data), max_degree_(max_degree), samples_(samples), warm_(max_degree + 1) {}

  /// Least max-residual found for targets approximated by scale * Blaschke.
  double best_residual(double scale) {
    double best = std::numeric_limits<double>::infinity();
    for (int degree = 0; degree <= max_degree_; ++degree) {
      BlaschkeFit fit{&data_, degree, scale};
      auto attempt = [&](Eigen::VectorXd x) {
        Eigen::NumericalDiff<BlaschkeFit> diff(fit);
        Eigen::LevenbergMarquardt<Eigen::NumericalDiff<BlaschkeFit>> lm(diff);
        lm.parameters.maxfev = 400 * (fit.inputs() + 1);
        lm.parameters.xtol = 1e-15;
        lm.parameters.ftol = 1e-15;
        lm.minimize(x);
        const double res = fit.max_residual(x);
        if (res < best) best = res;
        if (res < kOracleResidual) warm_[degree] = x;
        return res < kOracleResidual;
      };
      if (warm_[degree].size() == fit.inputs() && attempt(warm_[degree])) return best;
      for (int s = 0; s < samples_; ++s) {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(degree) << 32) ^
                            static_cast<std::uint64_t>(s));
        std::normal_distribution<double> gauss(0.0, 0.8);
        std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
        Eigen::VectorXd x(fit.inputs());
        x[0] = angle(rng);
        for (int k = 1; k < fit.inputs(); ++k) x[k] = gauss(rng);
        if (attempt(std::move(x))) return best;
      }
    }
    return best;
  }

 private:
  const PickData& data_;
  int max_degree_;
  int samples_;
  std::vector<Eigen::VectorXd> warm_;
};

}  // namespace

OracleResult brute_force_oracle(const PickData& data, int max_degree, int samples) {
  if (data.size() > 4 || max_degree < 0 || max_degree > 4 || samples < 1)
    throw Error(ErrorKind::invalid_argument, "brute_force_oracle supports n <= 4, degree <= 4, samples >= 1");
  OracleResult result;
  double lo = 0.0;
  for (const Complex& w : data.targets()) lo = std::max(lo, std::abs(w));
  if (lo == 0.0) return result;

  OracleSearch search(data, max_degree, samples);
  auto feasible = [&](double s, double& residual) {
    residual = search.best_residual(s);
    return residual < kOracleResidual;
  };
  double residual = 0.0;
  if (feasible(lo, residual)) {
    result.norm = lo;
    result.best_residual = residual;
    return result;
  }
  double hi = 2.0 * lo;
  double hi_residual = 0.0;
  constexpr int kMaxDoublings = 20;
  int doublings = 0;
  while (!feasible(hi, hi_residual)) {
    if (++doublings > kMaxDoublings) {
      result.norm = hi;
      result.best_residual = hi_residual;
      result.budget_exhausted = true;
      return result;
    }
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 60 && hi - lo > 1e-9 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double mid_residual = 0.0;
    if (feasible(mid, mid_residual)) {
      hi = mid;
      hi_residual = mid_residual;
    } else {
      lo = mid;
    }
  }
  result.norm = hi;
  result.best_residual = hi_residual;
  return result;
}

}  // namespace pickpeak
