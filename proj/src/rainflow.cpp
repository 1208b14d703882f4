#include "wfc/rainflow.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace wfc {

std::vector<double> extract_reversals(std::span<const double> series) {
    std::vector<double> rev;
    rev.reserve(series.size());
    for (double v : series) {
        if (!rev.empty() && v == rev.back()) continue;
        if (rev.size() >= 2) {
            const double a = rev[rev.size() - 2];
            const double b = rev.back();
            if ((b - a) * (v - b) > 0.0) {
                rev.back() = v;  // still monotone, extend the excursion
                continue;
            }
        }
        rev.push_back(v);
    }
    if (rev.size() == 1) rev.clear();
    return rev;
}

std::vector<Cycle> rainflow(std::span<const double> series) {
    std::vector<double> rev = extract_reversals(series);
    std::vector<Cycle> cycles;
    if (rev.size() < 2) return cycles;

    // The stack front is always the current series starting point: ranges
    // that reach it are counted as half cycles, interior ranges as full.
    std::deque<double> stack;

    auto range_of = [](double a, double b) { return std::fabs(b - a); };

    for (double point : rev) {
        stack.push_back(point);
        while (stack.size() >= 3) {
            const std::size_t m = stack.size();
            const double x = range_of(stack[m - 2], stack[m - 1]);
            const double y = range_of(stack[m - 3], stack[m - 2]);
            if (x < y) break;
            if (m == 3) {
                cycles.push_back({y, 0.5 * (stack[0] + stack[1]), 0.5});
                stack.pop_front();
            } else {
                cycles.push_back({y, 0.5 * (stack[m - 3] + stack[m - 2]), 1.0});
                stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(m - 3),
                            stack.begin() + static_cast<std::ptrdiff_t>(m - 1));
            }
        }
    }
    for (std::size_t i = 1; i < stack.size(); ++i) {
        cycles.push_back({range_of(stack[i - 1], stack[i]), 0.5 * (stack[i - 1] + stack[i]), 0.5});
    }
    return cycles;
}

double damage_equivalent_load(std::span<const Cycle> cycles, double wohler_m,
                              double duration_s, double f_eq_hz) {
    if (!(wohler_m > 0.0)) throw std::invalid_argument("damage_equivalent_load: m must be positive");
    if (!(duration_s > 0.0) || !(f_eq_hz > 0.0)) {
        throw std::invalid_argument("damage_equivalent_load: duration and f_eq must be positive");
    }
    if (cycles.empty()) return 0.0;
    const double n_eq = f_eq_hz * duration_s;
    double acc = 0.0;
    for (const auto& c : cycles) acc += c.count * std::pow(c.range, wohler_m);
    return std::pow(acc / n_eq, 1.0 / wohler_m);
}

}  // namespace wfc
