#include "kge/kernels.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

#include "kge/error.hpp"
#include "kge/format.hpp"

namespace kge {

namespace {

void require_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0)
    throw InputError(std::string("kernel parameter ") + name + " must be finite and positive");
}

double pow_int(double base, int exponent) {
  double result = 1.0;
  double factor = base;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result *= factor;
    factor *= factor;
    e >>= 1;
  }
  return result;
}

double rbf_entry(const Eigen::MatrixXd& X, Eigen::Index i, const Eigen::MatrixXd& Y,
                 Eigen::Index j, double inv_two_sigma_sq) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < X.cols(); ++k) {
    double diff = X(i, k) - Y(j, k);
    s += diff * diff;
  }
  return std::exp(-s * inv_two_sigma_sq);
}

double laplace_entry(const Eigen::MatrixXd& X, Eigen::Index i, const Eigen::MatrixXd& Y,
                     Eigen::Index j, double inv_scale) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < X.cols(); ++k) s += std::abs(X(i, k) - Y(j, k));
  return std::exp(-s * inv_scale);
}

double poly_entry(const Eigen::MatrixXd& X, Eigen::Index i, const Eigen::MatrixXd& Y,
                  Eigen::Index j, int degree, double offset, double scale) {
  double dot = 0.0;
  for (Eigen::Index k = 0; k < X.cols(); ++k) dot += X(i, k) * Y(j, k);
  return pow_int(scale * dot + offset, degree);
}

template <typename Entry>
void fill_gram(Eigen::MatrixXd& K, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
               bool symmetric, Entry entry) {
  if (symmetric) {
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = i; j < X.rows(); ++j) {
        double v = entry(X, i, X, j);
        K(i, j) = v;
        K(j, i) = v;
      }
  } else {
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      for (Eigen::Index j = 0; j < Y.rows(); ++j) K(i, j) = entry(X, i, Y, j);
  }
}

double parse_double_token(const std::string& token, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw InputError("kernel grammar: bad numeric value '" + token + "' in " + context);
  return v;
}

}  // namespace

void validate(const KernelSpec& kernel) {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RbfKernel>) {
          require_finite_positive(k.bandwidth, "bandwidth");
        } else if constexpr (std::is_same_v<T, LaplaceKernel>) {
          require_finite_positive(k.scale, "scale");
        } else {
          if (k.degree < 1) throw InputError("kernel parameter degree must be >= 1");
          if (!std::isfinite(k.offset) || k.offset < 0.0)
            throw InputError("kernel parameter offset must be finite and nonnegative");
          require_finite_positive(k.scale, "scale");
        }
      },
      kernel);
}

double eval(const KernelSpec& kernel, const Eigen::Ref<const Eigen::RowVectorXd>& x,
            const Eigen::Ref<const Eigen::RowVectorXd>& y) {
  if (x.size() != y.size())
    throw InputError("eval: points have mismatched dimensions");
  if (x.size() < 1) throw InputError("eval: points must have dimension >= 1");
  validate(kernel);
  return std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RbfKernel>) {
          double s = (x - y).squaredNorm();
          return std::exp(-s / (2.0 * k.bandwidth * k.bandwidth));
        } else if constexpr (std::is_same_v<T, LaplaceKernel>) {
          double s = (x - y).cwiseAbs().sum();
          return std::exp(-s / k.scale);
        } else {
          return pow_int(k.scale * x.dot(y) + k.offset, k.degree);
        }
      },
      kernel);
}

GramMatrix gram(const KernelSpec& kernel, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  validate(kernel);
  if (X.rows() == 0 || Y.rows() == 0) throw InputError("gram: empty sample");
  if (X.cols() != Y.cols()) throw InputError("gram: samples have mismatched dimensions");
  bool symmetric = (&X == &Y) || (X.data() == Y.data() && X.rows() == Y.rows());

  GramMatrix result;
  result.values.resize(X.rows(), Y.rows());
  result.symmetric = symmetric;

  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RbfKernel>) {
          double inv = 1.0 / (2.0 * k.bandwidth * k.bandwidth);
          fill_gram(result.values, X, Y, symmetric,
                    [inv](const Eigen::MatrixXd& A, Eigen::Index i, const Eigen::MatrixXd& B,
                          Eigen::Index j) { return rbf_entry(A, i, B, j, inv); });
        } else if constexpr (std::is_same_v<T, LaplaceKernel>) {
          double inv = 1.0 / k.scale;
          fill_gram(result.values, X, Y, symmetric,
                    [inv](const Eigen::MatrixXd& A, Eigen::Index i, const Eigen::MatrixXd& B,
                          Eigen::Index j) { return laplace_entry(A, i, B, j, inv); });
        } else {
          fill_gram(result.values, X, Y, symmetric,
                    [&k](const Eigen::MatrixXd& A, Eigen::Index i, const Eigen::MatrixXd& B,
                         Eigen::Index j) {
                      return poly_entry(A, i, B, j, k.degree, k.offset, k.scale);
                    });
        }
      },
      kernel);
  return result;
}

KernelSpec squared(const KernelSpec& kernel) {
  validate(kernel);
  return std::visit(
      [](const auto& k) -> KernelSpec {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RbfKernel>) {
          return RbfKernel{k.bandwidth / std::numbers::sqrt2_v<double>};
        } else if constexpr (std::is_same_v<T, LaplaceKernel>) {
          return LaplaceKernel{k.scale / 2.0};
        } else {
          return PolynomialKernel{2 * k.degree, k.offset, k.scale};
        }
      },
      kernel);
}

Eigen::VectorXd explicit_feature_map(const KernelSpec& kernel,
                                     const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  validate(kernel);
  const auto* poly = std::get_if<PolynomialKernel>(&kernel);
  if (poly == nullptr || poly->degree != 1)
    throw UnsupportedOracleError(
        "explicit_feature_map: only the degree-1 polynomial kernel has one");
  Eigen::Index d = x.size();
  bool with_offset = poly->offset > 0.0;
  Eigen::VectorXd phi(d + (with_offset ? 1 : 0));
  double root_scale = std::sqrt(poly->scale);
  for (Eigen::Index i = 0; i < d; ++i) phi(i) = root_scale * x(i);
  if (with_offset) phi(d) = std::sqrt(poly->offset);
  return phi;
}

ParsedKernel parse_kernel(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw InputError("kernel grammar: expected family:params, got '" + text + "'");
  std::string family = text.substr(0, colon);
  std::string params = text.substr(colon + 1);

  if (family == "rbf" && params == "median") return ParsedKernel{std::nullopt, true};

  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t pos = 0;
  while (pos < params.size()) {
    std::size_t comma = params.find(',', pos);
    std::string item = params.substr(pos, comma == std::string::npos ? comma : comma - pos);
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
      throw InputError("kernel grammar: expected key=value, got '" + item + "'");
    pairs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  auto lookup = [&](const std::string& key) -> const std::string* {
    for (const auto& [k, v] : pairs)
      if (k == key) return &v;
    return nullptr;
  };
  auto known = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : pairs) {
      bool ok = false;
      for (const char* key : keys) ok = ok || (k == key);
      if (!ok) throw InputError("kernel grammar: unknown key '" + k + "' for " + text);
    }
  };

  KernelSpec spec;
  if (family == "rbf") {
    known({"sigma"});
    const std::string* sigma = lookup("sigma");
    if (sigma == nullptr) throw InputError("kernel grammar: rbf requires sigma= or median");
    spec = RbfKernel{parse_double_token(*sigma, text)};
  } else if (family == "laplace") {
    known({"scale"});
    const std::string* scale = lookup("scale");
    if (scale == nullptr) throw InputError("kernel grammar: laplace requires scale=");
    spec = LaplaceKernel{parse_double_token(*scale, text)};
  } else if (family == "poly") {
    known({"degree", "offset", "scale"});
    const std::string* degree = lookup("degree");
    if (degree == nullptr) throw InputError("kernel grammar: poly requires degree=");
    double deg = parse_double_token(*degree, text);
    if (deg != static_cast<int>(deg))
      throw InputError("kernel grammar: degree must be an integer");
    const std::string* offset = lookup("offset");
    const std::string* scale = lookup("scale");
    spec = PolynomialKernel{static_cast<int>(deg),
                            offset ? parse_double_token(*offset, text) : 0.0,
                            scale ? parse_double_token(*scale, text) : 1.0};
  } else {
    throw InputError("kernel grammar: unknown family '" + family + "'");
  }
  validate(spec);
  return ParsedKernel{spec, false};
}

std::string format_kernel(const KernelSpec& kernel) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RbfKernel>) {
          return "rbf:sigma=" + format_shortest(k.bandwidth);
        } else if constexpr (std::is_same_v<T, LaplaceKernel>) {
          return "laplace:scale=" + format_shortest(k.scale);
        } else {
          return "poly:degree=" + std::to_string(k.degree) +
                 ",offset=" + format_shortest(k.offset) + ",scale=" + format_shortest(k.scale);
        }
      },
      kernel);
}

}  // namespace kge
