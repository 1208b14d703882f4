#include "wfc/pattern_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wfc {

namespace {

double norm2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

PatternSearchResult pattern_search_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const std::vector<double>& lo, const std::vector<double>& hi,
    const PatternSearchOptions& options) {
    const std::size_t n = x0.size();
    if (lo.size() != n || hi.size() != n) {
        throw std::invalid_argument("pattern_search_minimize: bound size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(hi[i] >= lo[i])) {
            throw std::invalid_argument("pattern_search_minimize: hi < lo");
        }
        x0[i] = std::clamp(x0[i], lo[i], hi[i]);
    }

    PatternSearchResult res;
    res.x = std::move(x0);
    res.f = f(res.x);
    res.evals = 1;

    std::vector<double> last_dir;  // unit displacement of the last accepted sweep

    // March along d from res.x, doubling while the objective keeps dropping.
    auto march = [&](std::vector<double> d) {
        while (res.evals < options.max_evals) {
            std::vector<double> probe(n);
            bool distinct = false;
            for (std::size_t i = 0; i < n; ++i) {
                probe[i] = std::clamp(res.x[i] + d[i], lo[i], hi[i]);
                distinct = distinct || probe[i] != res.x[i];
            }
            if (!distinct) return;
            const double fp = f(probe);
            ++res.evals;
            if (!(fp < res.f)) return;
            res.f = fp;
            res.x = std::move(probe);
            for (double& v : d) v *= 2.0;
        }
    };

    // One pass: shrink the step from initial_step until it drops below
    // min_step with no accepted move left at any size.
    auto pass = [&] {
        double step = options.initial_step;
        while (res.evals < options.max_evals) {
            const std::vector<double> sweep_start = res.x;
            const double f_start = res.f;

            for (std::size_t i = 0; i < n && res.evals < options.max_evals; ++i) {
                if (lo[i] == hi[i]) continue;
                for (double dir : {+1.0, -1.0}) {
                    const double trial = std::clamp(res.x[i] + dir * step, lo[i], hi[i]);
                    if (trial == res.x[i]) continue;
                    const double keep = res.x[i];
                    res.x[i] = trial;
                    const double ft = f(res.x);
                    ++res.evals;
                    if (ft < res.f) {
                        res.f = ft;
                        break;  // keep the move, skip the opposite direction
                    }
                    res.x[i] = keep;
                }
            }

            if (res.f == f_start && !last_dir.empty()) {
                // Coordinate poll failed: probe the previous descent
                // direction (and its reflection) before giving up on this
                // step size. This tracks valleys diagonal to the axes.
                for (double sgn : {+1.0, -1.0}) {
                    std::vector<double> probe(n);
                    bool distinct = false;
                    for (std::size_t i = 0; i < n; ++i) {
                        probe[i] =
                            std::clamp(res.x[i] + sgn * step * last_dir[i], lo[i], hi[i]);
                        distinct = distinct || probe[i] != res.x[i];
                    }
                    if (!distinct || res.evals >= options.max_evals) continue;
                    const double fp = f(probe);
                    ++res.evals;
                    if (fp < res.f) {
                        res.f = fp;
                        res.x = std::move(probe);
                        break;
                    }
                }
            }

            if (res.f < f_start) {
                // Accelerate along the accepted displacement, then remember
                // its direction for the diagonal poll above.
                std::vector<double> d(n);
                for (std::size_t i = 0; i < n; ++i) d[i] = res.x[i] - sweep_start[i];
                march(d);
                for (std::size_t i = 0; i < n; ++i) d[i] = res.x[i] - sweep_start[i];
                const double len = norm2(d);
                if (len > 0.0) {
                    for (double& v : d) v /= len;
                    last_dir = std::move(d);
                }
                continue;
            }

            step *= options.shrink;
            if (step < options.min_step) return true;
        }
        return false;  // evaluation budget exhausted mid-pass
    };

    // Converged passes restart at the coarse step for as long as a whole
    // pass still gains more than f_tol: repolling a refined point at large
    // steps jumps across curved valley sections that defeat fine steps.
    while (res.evals < options.max_evals) {
        const double f_before = res.f;
        if (!pass()) break;
        if (!(f_before - res.f > options.f_tol)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

PatternSearchResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const std::vector<double>& lo, const std::vector<double>& hi,
    const SimplexOptions& options) {
    const std::size_t n = x0.size();
    if (lo.size() != n || hi.size() != n) {
        throw std::invalid_argument("nelder_mead_minimize: bound size mismatch");
    }
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(hi[i] >= lo[i])) {
            throw std::invalid_argument("nelder_mead_minimize: hi < lo");
        }
        x0[i] = std::clamp(x0[i], lo[i], hi[i]);
        if (hi[i] > lo[i]) active.push_back(i);
    }

    PatternSearchResult res;
    res.x = std::move(x0);
    res.f = f(res.x);
    res.evals = 1;
    if (active.empty()) {
        res.converged = true;
        return res;
    }

    const std::size_t m = active.size();  // simplex has m + 1 vertices
    std::vector<std::vector<double>> v(m + 1);
    std::vector<double> fv(m + 1);

    auto eval = [&](const std::vector<double>& x) {
        ++res.evals;
        return f(x);
    };
    auto clamped = [&](std::vector<double> x) {
        for (std::size_t i : active) x[i] = std::clamp(x[i], lo[i], hi[i]);
        return x;
    };

    // One converged Nelder-Mead run seeded around res.x; returns false when
    // the evaluation budget ran out first.
    auto run = [&] {
        v[0] = res.x;
        fv[0] = res.f;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = active[k];
            const double h = options.initial_scale * (hi[i] - lo[i]);
            std::vector<double> x = res.x;
            x[i] = x[i] + h <= hi[i] ? x[i] + h : x[i] - h;
            v[k + 1] = std::move(x);
            if (res.evals >= options.max_evals) return false;
            fv[k + 1] = eval(v[k + 1]);
        }

        while (true) {
            // Order: best first, worst last.
            std::vector<std::size_t> idx(m + 1);
            for (std::size_t k = 0; k <= m; ++k) idx[k] = k;
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
            std::vector<std::vector<double>> vs(m + 1);
            std::vector<double> fs(m + 1);
            for (std::size_t k = 0; k <= m; ++k) {
                vs[k] = std::move(v[idx[k]]);
                fs[k] = fv[idx[k]];
            }
            v = std::move(vs);
            fv = std::move(fs);

            if (fv[0] < res.f) {
                res.x = v[0];
                res.f = fv[0];
            }

            double diam = 0.0;
            for (std::size_t i : active) {
                double mn = v[0][i], mx = v[0][i];
                for (std::size_t k = 1; k <= m; ++k) {
                    mn = std::min(mn, v[k][i]);
                    mx = std::max(mx, v[k][i]);
                }
                diam = std::max(diam, mx - mn);
            }
            if (fv[m] - fv[0] <= options.f_tol && diam <= options.x_tol) return true;
            if (res.evals >= options.max_evals) return false;

            std::vector<double> centroid(n, 0.0);
            for (std::size_t k = 0; k < m; ++k) {
                for (std::size_t i = 0; i < n; ++i) centroid[i] += v[k][i];
            }
            for (std::size_t i = 0; i < n; ++i) centroid[i] /= static_cast<double>(m);

            auto blend = [&](double t) {  // centroid + t (centroid - worst)
                std::vector<double> x(n);
                for (std::size_t i = 0; i < n; ++i) {
                    x[i] = centroid[i] + t * (centroid[i] - v[m][i]);
                }
                return clamped(std::move(x));
            };

            const auto reflected = blend(1.0);
            const double fr = eval(reflected);
            if (fr < fv[0]) {
                if (res.evals >= options.max_evals) {
                    v[m] = reflected;
                    fv[m] = fr;
                    continue;
                }
                const auto expanded = blend(2.0);
                const double fe = eval(expanded);
                if (fe < fr) {
                    v[m] = expanded;
                    fv[m] = fe;
                } else {
                    v[m] = reflected;
                    fv[m] = fr;
                }
                continue;
            }
            if (fr < fv[m - 1]) {
                v[m] = reflected;
                fv[m] = fr;
                continue;
            }
            // Contract toward the better of worst/reflected.
            const bool outside = fr < fv[m];
            const auto contracted = blend(outside ? 0.5 : -0.5);
            if (res.evals >= options.max_evals) return false;
            const double fc = eval(contracted);
            if (fc < (outside ? fr : fv[m])) {
                v[m] = contracted;
                fv[m] = fc;
                continue;
            }
            // Shrink everything toward the best vertex.
            for (std::size_t k = 1; k <= m; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    v[k][i] = v[0][i] + 0.5 * (v[k][i] - v[0][i]);
                }
                if (res.evals >= options.max_evals) return false;
                fv[k] = eval(v[k]);
            }
        }
    };

    // Clamping can flatten the simplex against a face; restarting around the
    // incumbent restores full rank and rides curved valleys further.
    while (res.evals < options.max_evals) {
        const double f_before = res.f;
        if (!run()) break;
        if (!(f_before - res.f > options.f_tol)) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace wfc
