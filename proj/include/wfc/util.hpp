#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfc {

inline constexpr double kPi = 3.14159265358979323846;

[[nodiscard]] inline double deg2rad(double d) { return d * kPi / 180.0; }
[[nodiscard]] inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// Numerically stable ln(1 + exp(t)).
[[nodiscard]] inline double softplus(double t) {
    if (t > 0.0) return t + std::log1p(std::exp(-t));
    return std::log1p(std::exp(t));
}

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    [[nodiscard]] double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

/// Piecewise-linear table over a strictly increasing abscissa.
/// Evaluation clamps to the end values outside the table range.
class LinearTable {
  public:
    LinearTable() = default;
    LinearTable(std::vector<double> xs, std::vector<double> ys);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] bool empty() const { return xs_.empty(); }
    [[nodiscard]] const std::vector<double>& xs() const { return xs_; }
    [[nodiscard]] const std::vector<double>& ys() const { return ys_; }

  private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// Golden-section search for the minimum of a unimodal function on [lo, hi].
/// Returns the abscissa of the minimum to within xtol.
[[nodiscard]] double golden_section_min(const std::function<double(double)>& f,
                                        double lo, double hi, double xtol);

/// 64-bit FNV-1a running hash.
class Fnv1a64 {
  public:
    void update(const void* data, std::size_t n);
    void update(std::span<const double> values) {
        update(values.data(), values.size() * sizeof(double));
    }
    void update(const std::string& s) { update(s.data(), s.size()); }
    [[nodiscard]] std::uint64_t digest() const { return state_; }
    [[nodiscard]] std::string hex() const;

  private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic combination of seed components into one stream seed.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                                     std::uint64_t c = 0, std::uint64_t d = 0);

/// Standard-normal sampler (Box-Muller) with explicit, self-contained state.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
    double operator()();

  private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Regularized incomplete beta function I_x(a, b).
[[nodiscard]] double regularized_incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of the Student-t distribution: P(|T_dof| >= t).
[[nodiscard]] double student_t_two_sided_p(double t, double dof);

}  // namespace wfc
