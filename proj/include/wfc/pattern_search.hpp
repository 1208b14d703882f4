#pragma once

#include <functional>
#include <vector>

namespace wfc {

/// Options for the bounded pattern search. Each pass shrinks the poll step
/// from `initial_step` by `shrink` until it falls below `min_step`; passes
/// restart at the coarse step until a whole pass improves the objective by
/// no more than `f_tol` or `max_evals` is spent.
struct PatternSearchOptions {
    double initial_step = 0.25;
    double min_step = 1e-4;
    double f_tol = 1e-12;
    double shrink = 0.5;
    int max_evals = 200000;
};

struct PatternSearchResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Derivative-free minimization of f over the box [lo, hi]. Coordinates
/// with lo == hi are held fixed. Deterministic: no internal randomness.
[[nodiscard]] PatternSearchResult pattern_search_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const std::vector<double>& lo, const std::vector<double>& hi,
    const PatternSearchOptions& options = {});

/// Options for the bounded simplex search. `initial_scale` sizes the first
/// simplex as a fraction of each coordinate's box width; converged runs
/// restart around the incumbent until a whole run gains no more than
/// `f_tol`.
struct SimplexOptions {
    double initial_scale = 0.2;
    double f_tol = 1e-12;
    double x_tol = 1e-9;
    int max_evals = 200000;
};

/// Nelder-Mead simplex minimization of f over the box [lo, hi], candidate
/// points clamped to the box. Coordinates with lo == hi are held fixed.
/// Deterministic; tracks curved valleys much better than the axis polls of
/// pattern_search_minimize.
[[nodiscard]] PatternSearchResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const std::vector<double>& lo, const std::vector<double>& hi,
    const SimplexOptions& options = {});

}  // namespace wfc
