#include "kge/synth.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

#include "kge/error.hpp"
#include "kge/rng.hpp"

namespace kge {

namespace {

struct RejectionBudget {
  std::uint64_t attempts = 0;
  std::uint64_t accepts = 0;

  void attempt() {
    ++attempts;
    if (attempts >= 1000000 && attempts % 1000000 == 0) {
      double rate = static_cast<double>(accepts) / static_cast<double>(attempts);
      if (rate < 1e-6)
        throw PathologicalSpecError(
            "generate: rejection acceptance rate fell below 1e-6");
    }
  }
  void accept() { ++accepts; }
};

// Standardized truncated-normal vector: z with |z|_2 <= radius.
Eigen::VectorXd truncated_normal(Eigen::Index d, double radius, Pcg32& rng,
                                 RejectionBudget& budget) {
  Eigen::VectorXd z(d);
  for (;;) {
    budget.attempt();
    for (Eigen::Index i = 0; i < d; ++i) z(i) = rng.next_normal();
    if (z.norm() <= radius) {
      budget.accept();
      return z;
    }
  }
}

void draw_rows(const DistributionSpec& spec, Sample& out, Pcg32& rng, RejectionBudget& budget);

void draw_uniform_cube(const UniformCube& s, Sample& out, Pcg32& rng) {
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < s.dim; ++j)
      out(i, j) = (2.0 * rng.next_double() - 1.0) * s.half_width;
}

void draw_truncated_gaussian(const TruncatedGaussian& s, Sample& out, Pcg32& rng,
                             RejectionBudget& budget) {
  Eigen::Index d = s.mean.size();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    Eigen::VectorXd z = truncated_normal(d, s.radius, rng, budget);
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = s.mean(j) + s.scale(j) * z(j);
  }
}

void draw_gaussian_mixture(const GaussianMixture& s, Sample& out, Pcg32& rng,
                           RejectionBudget& budget) {
  constexpr double kComponentRadius = 3.0;
  Eigen::Index d = s.scale.size();
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    double u = rng.next_double();
    std::size_t comp = 0;
    double cum = 0.0;
    for (std::size_t c = 0; c < s.weights.size(); ++c) {
      cum += s.weights[c];
      if (u < cum) {
        comp = c;
        break;
      }
      comp = c;
    }
    Eigen::VectorXd z = truncated_normal(d, kComponentRadius, rng, budget);
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = s.means[comp](j) + s.scale(j) * z(j);
  }
}

void draw_rows(const DistributionSpec& spec, Sample& out, Pcg32& rng, RejectionBudget& budget) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformCube>) {
          draw_uniform_cube(s, out, rng);
        } else if constexpr (std::is_same_v<T, TruncatedGaussian>) {
          draw_truncated_gaussian(s, out, rng, budget);
        } else if constexpr (std::is_same_v<T, GaussianMixture>) {
          draw_gaussian_mixture(s, out, rng, budget);
        } else if constexpr (std::is_same_v<T, MeanShift>) {
          draw_rows(*s.base, out, rng, budget);
          out.rowwise() += s.shift.transpose();
        } else {
          draw_rows(*s.base, out, rng, budget);
          out *= s.factor;
        }
      },
      spec);
}

void require_positive_vector(const Eigen::VectorXd& v, const char* what) {
  if (v.size() < 1) throw InputError(std::string("distribution spec: empty ") + what);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i)) || v(i) <= 0.0)
      throw InputError(std::string("distribution spec: ") + what +
                       " entries must be finite and positive");
}

}  // namespace

void validate_spec(const DistributionSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformCube>) {
          if (s.dim < 1) throw InputError("distribution spec: dimension must be >= 1");
          if (!std::isfinite(s.half_width) || s.half_width <= 0.0)
            throw InputError("distribution spec: half_width must be positive");
        } else if constexpr (std::is_same_v<T, TruncatedGaussian>) {
          if (s.mean.size() < 1) throw InputError("distribution spec: empty mean");
          if (!s.mean.allFinite())
            throw InputError("distribution spec: mean entries must be finite");
          require_positive_vector(s.scale, "scale");
          if (s.scale.size() != s.mean.size())
            throw InputError("distribution spec: mean and scale dimensions differ");
          if (!std::isfinite(s.radius) || s.radius <= 0.0)
            throw InputError("distribution spec: radius must be positive");
        } else if constexpr (std::is_same_v<T, GaussianMixture>) {
          if (s.means.empty()) throw InputError("distribution spec: mixture needs components");
          if (s.weights.size() != s.means.size())
            throw InputError("distribution spec: one weight per component required");
          require_positive_vector(s.scale, "scale");
          double sum = 0.0;
          for (double w : s.weights) {
            if (!std::isfinite(w) || w < 0.0)
              throw InputError("distribution spec: weights must be nonnegative");
            sum += w;
          }
          if (std::abs(sum - 1.0) > 1e-12)
            throw InputError("distribution spec: weights must sum to 1");
          for (const auto& mean : s.means) {
            if (mean.size() != s.scale.size())
              throw InputError("distribution spec: component dimensions differ");
            if (!mean.allFinite())
              throw InputError("distribution spec: mean entries must be finite");
          }
        } else if constexpr (std::is_same_v<T, MeanShift>) {
          if (!s.base) throw InputError("distribution spec: shift needs a base");
          validate_spec(*s.base);
          if (s.shift.size() != dimension(*s.base))
            throw InputError("distribution spec: shift dimension does not match base");
          if (!s.shift.allFinite())
            throw InputError("distribution spec: shift entries must be finite");
        } else {
          if (!s.base) throw InputError("distribution spec: scale change needs a base");
          validate_spec(*s.base);
          if (!std::isfinite(s.factor) || s.factor <= 0.0)
            throw InputError("distribution spec: factor must be positive");
        }
      },
      spec);
}

int dimension(const DistributionSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformCube>) {
          return s.dim;
        } else if constexpr (std::is_same_v<T, TruncatedGaussian>) {
          return static_cast<int>(s.mean.size());
        } else if constexpr (std::is_same_v<T, GaussianMixture>) {
          return static_cast<int>(s.scale.size());
        } else if constexpr (std::is_same_v<T, MeanShift>) {
          return static_cast<int>(s.shift.size());
        } else {
          return dimension(*s.base);
        }
      },
      spec);
}

Sample generate(const DistributionSpec& spec, int n, std::uint64_t seed) {
  validate_spec(spec);
  if (n < 1) throw InputError("generate: n must be >= 1");
  Sample out(n, dimension(spec));
  Pcg32 rng(derive_seed(seed, 0));
  RejectionBudget budget;
  draw_rows(spec, out, rng, budget);
  return out;
}

namespace {

double parse_scalar(const std::string& token, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw InputError("distribution grammar: bad numeric value '" + token + "' in " + context);
  return v;
}

Eigen::VectorXd parse_vector(const std::string& token, const std::string& context) {
  std::vector<double> entries;
  std::size_t pos = 0;
  while (pos <= token.size()) {
    std::size_t semi = token.find(';', pos);
    std::string part = token.substr(pos, semi == std::string::npos ? semi : semi - pos);
    entries.push_back(parse_scalar(part, context));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return v;
}

// Broadcast a scalar to d entries; a full vector must already have d entries.
Eigen::VectorXd broadcast(const Eigen::VectorXd& v, Eigen::Index d, const std::string& context) {
  if (v.size() == d) return v;
  if (v.size() == 1) return Eigen::VectorXd::Constant(d, v(0));
  throw InputError("distribution grammar: expected 1 or " + std::to_string(d) +
                   " entries in " + context);
}

// Splits "k1=v1,k2=v2,..." at top level, treating (...) groups as opaque.
std::vector<std::pair<std::string, std::string>> split_pairs(const std::string& params,
                                                             const std::string& context) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t pos = 0;
  int depth = 0;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string item = params.substr(start, end - start);
    if (item.empty()) throw InputError("distribution grammar: empty item in " + context);
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size())
      throw InputError("distribution grammar: expected key=value, got '" + item + "'");
    pairs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  };
  for (; pos < params.size(); ++pos) {
    char c = params[pos];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush(pos);
      start = pos + 1;
    }
  }
  if (depth != 0) throw InputError("distribution grammar: unbalanced parentheses in " + context);
  flush(params.size());
  return pairs;
}

const std::string* lookup(const std::vector<std::pair<std::string, std::string>>& pairs,
                          const std::string& key) {
  for (const auto& [k, v] : pairs)
    if (k == key) return &v;
  return nullptr;
}

void reject_unknown(const std::vector<std::pair<std::string, std::string>>& pairs,
                    std::initializer_list<const char*> keys, const std::string& context) {
  for (const auto& [k, v] : pairs) {
    bool ok = false;
    for (const char* key : keys) ok = ok || (k == key);
    if (!ok)
      throw InputError("distribution grammar: unknown key '" + k + "' in " + context);
  }
}

DistributionSpec parse_base(const std::string& value, const std::string& context) {
  if (value.size() < 2 || value.front() != '(' || value.back() != ')')
    throw InputError("distribution grammar: base must be parenthesized in " + context);
  return parse_distribution(value.substr(1, value.size() - 2));
}

}  // namespace

DistributionSpec parse_distribution(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw InputError("distribution grammar: expected family:params, got '" + text + "'");
  std::string family = text.substr(0, colon);
  auto pairs = split_pairs(text.substr(colon + 1), text);

  DistributionSpec spec = UniformCube{};
  if (family == "ucube") {
    reject_unknown(pairs, {"d", "hw"}, text);
    const std::string* d = lookup(pairs, "d");
    const std::string* hw = lookup(pairs, "hw");
    if (d == nullptr || hw == nullptr)
      throw InputError("distribution grammar: ucube requires d= and hw=");
    double dv = parse_scalar(*d, text);
    if (dv != static_cast<int>(dv) || dv < 1)
      throw InputError("distribution grammar: d must be a positive integer");
    spec = UniformCube{static_cast<int>(dv), parse_scalar(*hw, text)};
  } else if (family == "tgauss") {
    reject_unknown(pairs, {"d", "mean", "scale", "radius"}, text);
    const std::string* d_str = lookup(pairs, "d");
    const std::string* mean_str = lookup(pairs, "mean");
    Eigen::Index d = 0;
    if (d_str != nullptr) {
      double dv = parse_scalar(*d_str, text);
      if (dv != static_cast<int>(dv) || dv < 1)
        throw InputError("distribution grammar: d must be a positive integer");
      d = static_cast<Eigen::Index>(dv);
    }
    Eigen::VectorXd mean =
        mean_str != nullptr ? parse_vector(*mean_str, text) : Eigen::VectorXd::Zero(std::max<Eigen::Index>(d, 1));
    if (d == 0) d = mean.size();
    mean = broadcast(mean, d, text);
    const std::string* scale_str = lookup(pairs, "scale");
    Eigen::VectorXd scale = scale_str != nullptr
                                ? broadcast(parse_vector(*scale_str, text), d, text)
                                : Eigen::VectorXd::Ones(d);
    const std::string* radius_str = lookup(pairs, "radius");
    double radius = radius_str != nullptr ? parse_scalar(*radius_str, text) : 3.0;
    spec = TruncatedGaussian{mean, scale, radius};
  } else if (family == "gmix") {
    reject_unknown(pairs, {"d", "means", "scale", "weights"}, text);
    const std::string* means_str = lookup(pairs, "means");
    if (means_str == nullptr)
      throw InputError("distribution grammar: gmix requires means=");
    std::vector<Eigen::VectorXd> means;
    std::size_t pos = 0;
    const std::string& ms = *means_str;
    while (pos <= ms.size()) {
      std::size_t bar = ms.find('|', pos);
      means.push_back(parse_vector(ms.substr(pos, bar == std::string::npos ? bar : bar - pos), text));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    Eigen::Index d = means.front().size();
    const std::string* d_str = lookup(pairs, "d");
    if (d_str != nullptr) {
      double dv = parse_scalar(*d_str, text);
      if (dv != static_cast<int>(dv) || dv < 1)
        throw InputError("distribution grammar: d must be a positive integer");
      d = static_cast<Eigen::Index>(dv);
    }
    for (auto& mean : means) mean = broadcast(mean, d, text);
    const std::string* scale_str = lookup(pairs, "scale");
    Eigen::VectorXd scale = scale_str != nullptr
                                ? broadcast(parse_vector(*scale_str, text), d, text)
                                : Eigen::VectorXd::Ones(d);
    std::vector<double> weights(means.size(), 1.0 / static_cast<double>(means.size()));
    const std::string* weights_str = lookup(pairs, "weights");
    if (weights_str != nullptr) {
      Eigen::VectorXd w = parse_vector(*weights_str, text);
      if (static_cast<std::size_t>(w.size()) != means.size())
        throw InputError("distribution grammar: one weight per component required");
      for (std::size_t i = 0; i < weights.size(); ++i) weights[i] = w(static_cast<Eigen::Index>(i));
    }
    spec = GaussianMixture{std::move(means), scale, std::move(weights)};
  } else if (family == "shift") {
    reject_unknown(pairs, {"shift", "base"}, text);
    const std::string* shift_str = lookup(pairs, "shift");
    const std::string* base_str = lookup(pairs, "base");
    if (shift_str == nullptr || base_str == nullptr)
      throw InputError("distribution grammar: shift requires shift= and base=");
    auto base = std::make_shared<DistributionSpec>(parse_base(*base_str, text));
    Eigen::VectorXd shift =
        broadcast(parse_vector(*shift_str, text), dimension(*base), text);
    spec = MeanShift{std::move(base), std::move(shift)};
  } else if (family == "scale") {
    reject_unknown(pairs, {"factor", "base"}, text);
    const std::string* factor_str = lookup(pairs, "factor");
    const std::string* base_str = lookup(pairs, "base");
    if (factor_str == nullptr || base_str == nullptr)
      throw InputError("distribution grammar: scale requires factor= and base=");
    auto base = std::make_shared<DistributionSpec>(parse_base(*base_str, text));
    spec = ScaleChange{std::move(base), parse_scalar(*factor_str, text)};
  } else {
    throw InputError("distribution grammar: unknown family '" + family + "'");
  }
  validate_spec(spec);
  return spec;
}

}  // namespace kge
