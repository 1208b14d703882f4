#include "wfc/util.hpp"

#include <algorithm>
#include <cstring>

namespace wfc {

LinearTable::LinearTable(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size() || xs_.size() < 2) {
        throw std::invalid_argument("LinearTable: need >= 2 rows of equal length");
    }
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i] > xs_[i - 1])) {
            throw std::invalid_argument("LinearTable: abscissa must be strictly increasing");
        }
    }
}

double LinearTable::operator()(double x) const {
    if (xs_.empty()) throw std::logic_error("LinearTable: empty");
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    std::size_t lo = hi - 1;
    double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + t * (ys_[hi] - ys_[lo]);
}

double golden_section_min(const std::function<double(double)>& f,
                          double lo, double hi, double xtol) {
    if (!(hi > lo)) throw std::invalid_argument("golden_section_min: hi must exceed lo");
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

void Fnv1a64::update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        state_ ^= p[i];
        state_ *= 0x100000001b3ULL;
    }
}

std::string Fnv1a64::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t v = state_;
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    std::uint64_t state = a;
    std::uint64_t out = splitmix64(state);
    state ^= b + 0x9e3779b97f4a7c15ULL;
    out ^= splitmix64(state);
    state ^= c + 0xc2b2ae3d27d4eb4fULL;
    out ^= splitmix64(state);
    state ^= d + 0x165667b19e3779f9ULL;
    out ^= splitmix64(state);
    return out;
}

double NormalSampler::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u1 = 0.0;
    do {
        u1 = unit(rng_);
    } while (u1 <= 1e-300);
    double u2 = unit(rng_);
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

namespace {

// Continued-fraction evaluation for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-14;
    double qab = a + b;
    double qap = a + 1.0;
    double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("regularized_incomplete_beta: a, b must be positive");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("student_t_two_sided_p: dof must be positive");
    double x = dof / (dof + t * t);
    return regularized_incomplete_beta(0.5 * dof, 0.5, x);
}

}  // namespace wfc
