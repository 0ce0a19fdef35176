#include "ovib/quasiclassics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ovib/errors.hpp"

namespace ovib::qc {

namespace {

constexpr double kPi = std::numbers::pi;

double vh(double x, const ModelParams& p) { return potential_hermitian(x, p); }

// d(Re V)/dx and d2(Re V)/dx2 for the general phase/branch form
double dvh(double x, const ModelParams& p) {
    const int s = branch_sign(p.branch);
    return p.omega * x - p.gamma0 * s * p.eta * std::cos(p.phi - p.eta * x);
}
double d2vh(double x, const ModelParams& p) {
    const int s = branch_sign(p.branch);
    return p.omega - p.gamma0 * s * p.eta * p.eta * std::sin(p.phi - p.eta * x);
}

double root_scan_step(const ModelParams& p) {
    if (p.eta <= 0.0) return 0.01;
    return std::min(0.01, kPi / (50.0 * p.eta));
}

// beyond this x, Re V > E with certainty (parabola dominates the bounded ripple)
double scan_upper(double energy, const ModelParams& p) {
    const double reach =
        std::sqrt(std::max(0.0, 2.0 * (energy + p.gamma0 + p.omega) / p.omega));
    return reach + 2.0 * kPi / std::max(p.eta, 1.0) + 1.0;
}

template <class F>
double bisect(F&& f, double a, double b, double fa) {
    for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fa <= 0.0 && fm <= 0.0) || (fa > 0.0 && fm > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// ------------------------------------------------------------- quadrature

struct GK15 {
    // QUADPACK 7-15 Gauss-Kronrod pair
    static constexpr double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class F>
void gk15(F&& f, double a, double b, double& value, double& error) {
    const double c = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(c);
    double kron = GK15::wgk[7] * fc;
    double gauss = GK15::wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * GK15::xgk[i];
        const double fsum = f(c - dx) + f(c + dx);
        kron += GK15::wgk[i] * fsum;
        if (i % 2 == 1) gauss += GK15::wg[i / 2] * fsum;
    }
    value = kron * half;
    error = std::abs(kron - gauss) * half;
}

template <class F>
double adaptive_quadrature(F&& f, double a, double b, double abs_tol) {
    struct Interval {
        double a, b;
    };
    std::vector<Interval> stack{{a, b}};
    const double span = b - a;
    double total = 0.0;
    int evaluations = 0;
    while (!stack.empty()) {
        const Interval iv = stack.back();
        stack.pop_back();
        double v, e;
        gk15(f, iv.a, iv.b, v, e);
        ++evaluations;
        const double budget = abs_tol * std::max((iv.b - iv.a) / span, 1e-12);
        if (e <= budget || iv.b - iv.a < 1e-13 * span || evaluations > 20000) {
            total += v;
            continue;
        }
        const double m = 0.5 * (iv.a + iv.b);
        stack.push_back({iv.a, m});
        stack.push_back({m, iv.b});
    }
    return total;
}

double wrapped_distance(double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

// disjoint-set for ridge component labeling
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

std::vector<double> turning_point_roots(double energy, const ModelParams& p) {
    p.validate();
    const double step = root_scan_step(p);
    const double hi = scan_upper(energy, p);
    std::vector<double> roots;
    double x_prev = 0.0;
    double f_prev = vh(x_prev, p) - energy;
    if (f_prev == 0.0) f_prev = -0.0; // x = 0 is not a positive root
    for (double x = step; x <= hi; x += step) {
        const double f = vh(x, p) - energy;
        if ((f_prev <= 0.0 && f > 0.0) || (f_prev > 0.0 && f <= 0.0)) {
            const auto g = [&](double t) { return vh(t, p) - energy; };
            roots.push_back(bisect(g, x_prev, x, f_prev));
        }
        x_prev = x;
        f_prev = f;
    }
    return roots;
}

namespace {

// smallest or largest positive root with the tangent-contact fallback
double turning_point_select(double energy, const ModelParams& p, bool outermost) {
    const auto roots = turning_point_roots(energy, p);
    if (!roots.empty()) return outermost ? roots.back() : roots.front();

    // no sign change: either E is below the minimum, or it grazes it
    const double step = root_scan_step(p);
    const double hi = scan_upper(energy, p);
    double fmin = std::numeric_limits<double>::infinity();
    double xmin = 0.0;
    for (double x = 0.0; x <= hi; x += step) {
        const double f = vh(x, p) - energy;
        if (f < fmin) {
            fmin = f;
            xmin = x;
        }
    }
    const double graze = 1e-9 * (std::abs(energy) + p.omega + p.gamma0);
    if (fmin <= graze) return xmin;
    throw NoClassicalRegion("turning_point: E = " + std::to_string(energy) +
                            " lies below the potential minimum by " + std::to_string(fmin));
}

} // namespace

double turning_point(double energy, const ModelParams& p) {
    return turning_point_select(energy, p, /*outermost=*/false);
}

double outermost_turning_point(double energy, const ModelParams& p) {
    return turning_point_select(energy, p, /*outermost=*/true);
}

double bs_phase(double energy, const ModelParams& p) {
    const double xt = turning_point(energy, p);
    if (xt < 1e-12) return -0.5;
    // with the smallest-root rule the interval (0, xt) has a single sign of
    // ReV - E; if the centre is forbidden the clipped integrand vanishes
    if (vh(0.0, p) - energy > 0.0) return -0.5;

    const auto integrand = [&](double theta) {
        const double x = xt * std::sin(theta);
        const double val = 2.0 * (energy - vh(x, p)) / p.omega;
        return std::sqrt(std::max(0.0, val)) * xt * std::cos(theta);
    };
    const double half = adaptive_quadrature(integrand, 0.0, 0.5 * kPi, 5e-7);
    return 2.0 * half / kPi - 0.5;
}

PhaseMap phase_map(std::vector<double> eta_axis, std::vector<double> energy_axis,
                   const ModelParams& p, const PhaseMapOptions& opt) {
    if (!std::is_sorted(eta_axis.begin(), eta_axis.end()) ||
        !std::is_sorted(energy_axis.begin(), energy_axis.end()))
        throw std::invalid_argument("phase_map: axes must be sorted ascending");

    PhaseMap map;
    map.eta_axis = std::move(eta_axis);
    map.energy_axis = std::move(energy_axis);
    const std::size_t ne = map.eta_axis.size();
    const std::size_t nE = map.energy_axis.size();
    map.values.assign(ne * nE, 0.0);
    map.mask.assign(ne * nE, 0);

    for (std::size_t i = 0; i < ne; ++i) {
        ModelParams col = p;
        col.eta = map.eta_axis[i];
        for (std::size_t j = 0; j < nE; ++j) {
            try {
                const double n = bs_phase(map.energy_axis[j], col);
                map.values[i * nE + j] = n - std::floor(n);
            } catch (const NoClassicalRegion&) {
                map.mask[i * nE + j] = 1;
            }
        }
    }

    // discontinuity edges: wrapped jump above threshold between unmasked cells
    std::vector<std::uint8_t> ridge_cell(ne * nE, 0);
    struct Edge {
        std::size_t ia, ja, ib, jb;
        double jump;
    };
    std::vector<Edge> edges;
    const auto consider = [&](std::size_t ia, std::size_t ja, std::size_t ib, std::size_t jb) {
        if (map.mask[ia * nE + ja] || map.mask[ib * nE + jb]) return;
        const double jump = wrapped_distance(map.values[ia * nE + ja], map.values[ib * nE + jb]);
        if (jump > opt.ridge_threshold) {
            edges.push_back({ia, ja, ib, jb, jump});
            ridge_cell[ia * nE + ja] = 1;
            ridge_cell[ib * nE + jb] = 1;
        }
    };
    for (std::size_t i = 0; i < ne; ++i)
        for (std::size_t j = 0; j < nE; ++j) {
            if (i + 1 < ne) consider(i, j, i + 1, j);
            if (j + 1 < nE) consider(i, j, i, j + 1);
        }

    // 8-neighbourhood components over flagged cells
    UnionFind uf(ne * nE);
    for (std::size_t i = 0; i < ne; ++i)
        for (std::size_t j = 0; j < nE; ++j) {
            if (!ridge_cell[i * nE + j]) continue;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(ne) ||
                        jj >= static_cast<std::ptrdiff_t>(nE))
                        continue;
                    const auto other = static_cast<std::size_t>(ii) * nE + static_cast<std::size_t>(jj);
                    if (ridge_cell[other]) uf.unite(static_cast<int>(i * nE + j), static_cast<int>(other));
                }
        }

    // compact component ids in first-seen order
    std::vector<int> id_of_root(ne * nE, -1);
    int next_id = 0;
    map.ridges.reserve(edges.size());
    for (const auto& e : edges) {
        const int root = uf.find(static_cast<int>(e.ia * nE + e.ja));
        if (id_of_root[static_cast<std::size_t>(root)] < 0) id_of_root[static_cast<std::size_t>(root)] = next_id++;
        RidgePoint rp;
        rp.eta = 0.5 * (map.eta_axis[e.ia] + map.eta_axis[e.ib]);
        rp.energy = 0.5 * (map.energy_axis[e.ja] + map.energy_axis[e.jb]);
        rp.jump = e.jump;
        rp.component = id_of_root[static_cast<std::size_t>(root)];
        map.ridges.push_back(rp);
    }
    return map;
}

namespace {

// signed step wrapped into (-1/2, 1/2]
double wrapped_step(double from, double to) {
    const double d = to - from;
    return d - std::round(d);
}

} // namespace

std::vector<CutEndpoint> branch_cut_endpoints(const PhaseMap& map, double excess_threshold) {
    const std::size_t ne = map.eta_axis.size();
    const std::size_t nE = map.energy_axis.size();
    std::vector<CutEndpoint> out;
    if (ne < 3 || nE < 5) return out;

    // trend-corrected discontinuity flags per cell
    std::vector<std::uint8_t> flag(ne * nE, 0);
    const auto scan_line = [&](bool along_energy, std::size_t fixed) {
        const std::size_t len = along_energy ? nE : ne;
        std::vector<double> steps(len - 1, 0.0);
        std::vector<std::uint8_t> ok(len - 1, 0);
        for (std::size_t t = 0; t + 1 < len; ++t) {
            const std::size_t ia = along_energy ? fixed : t;
            const std::size_t ja = along_energy ? t : fixed;
            const std::size_t ib = along_energy ? fixed : t + 1;
            const std::size_t jb = along_energy ? t + 1 : fixed;
            if (map.masked(ia, ja) || map.masked(ib, jb)) continue;
            steps[t] = wrapped_step(map.value(ia, ja), map.value(ib, jb));
            ok[t] = 1;
        }
        for (std::size_t t = 0; t + 1 < len; ++t) {
            if (!ok[t]) continue;
            // reference level: the largest step nearby but not adjacent, so a
            // one-edge jump stands out while a several-cell steep (smooth)
            // stretch suppresses itself
            double reference = 0.0;
            std::size_t have = 0;
            for (std::size_t u = (t >= 5 ? t - 5 : 0); u < std::min(len - 1, t + 6); ++u) {
                if (!ok[u]) continue;
                const std::size_t dist = u > t ? u - t : t - u;
                if (dist < 2) continue;
                reference = std::max(reference, std::abs(steps[u]));
                ++have;
            }
            if (have < 3) continue;
            if (std::abs(steps[t]) - reference > excess_threshold) {
                const std::size_t ia = along_energy ? fixed : t;
                const std::size_t ja = along_energy ? t : fixed;
                const std::size_t ib = along_energy ? fixed : t + 1;
                const std::size_t jb = along_energy ? t + 1 : fixed;
                flag[ia * nE + ja] = 1;
                flag[ib * nE + jb] = 1;
            }
        }
    };
    for (std::size_t i = 0; i < ne; ++i) scan_line(/*along_energy=*/true, i);
    for (std::size_t j = 0; j < nE; ++j) scan_line(/*along_energy=*/false, j);

    // components over flagged cells; the energy reach is wider than one cell
    // because a cut line can descend several rows per column
    UnionFind uf(ne * nE);
    for (std::size_t i = 0; i < ne; ++i)
        for (std::size_t j = 0; j < nE; ++j) {
            if (!flag[i * nE + j]) continue;
            for (int di = -1; di <= 1; ++di)
                for (int dj = -4; dj <= 4; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(ne) ||
                        jj >= static_cast<std::ptrdiff_t>(nE))
                        continue;
                    const auto other =
                        static_cast<std::size_t>(ii) * nE + static_cast<std::size_t>(jj);
                    if (flag[other]) uf.unite(static_cast<int>(i * nE + j), static_cast<int>(other));
                }
        }

    std::vector<int> id_of_root(ne * nE, -1);
    int next_id = 0;
    struct Acc {
        std::size_t i_min = std::numeric_limits<std::size_t>::max();
        std::size_t count = 0;
        std::vector<double> head_energies;
    };
    std::vector<Acc> acc;
    for (std::size_t i = 0; i < ne; ++i)
        for (std::size_t j = 0; j < nE; ++j) {
            if (!flag[i * nE + j]) continue;
            const int root = uf.find(static_cast<int>(i * nE + j));
            int& id = id_of_root[static_cast<std::size_t>(root)];
            if (id < 0) {
                id = next_id++;
                acc.emplace_back();
            }
            auto& a = acc[static_cast<std::size_t>(id)];
            ++a.count;
            if (i < a.i_min) {
                a.i_min = i;
                a.head_energies.clear();
            }
            if (i == a.i_min) a.head_energies.push_back(map.energy_axis[j]);
        }

    for (int c = 0; c < next_id; ++c) {
        auto& a = acc[static_cast<std::size_t>(c)];
        std::sort(a.head_energies.begin(), a.head_energies.end());
        CutEndpoint ep;
        ep.eta = map.eta_axis[a.i_min];
        ep.energy = a.head_energies[a.head_energies.size() / 2];
        ep.component = c;
        ep.points = a.count;
        out.push_back(ep);
    }
    return out;
}

double tan_root_approx(std::size_t n) {
    if (n == 0) return 0.0;
    const double base = 2.0 * kPi * static_cast<double>(n) + 0.5 * kPi;
    return base - 1.0 / base;
}

std::vector<double> tan_roots(std::size_t count) {
    if (count == 0) throw std::invalid_argument("tan_roots: count must be >= 1");
    std::vector<double> roots;
    roots.reserve(count);
    roots.push_back(0.0);
    for (std::size_t n = 1; n < count; ++n) {
        double a = tan_root_approx(n);
        const double lo = 2.0 * kPi * static_cast<double>(n);
        const double hi = lo + 0.5 * kPi;
        for (int it = 0; it < 60; ++it) {
            const double t = std::tan(a);
            const double delta = (t - a) / (t * t); // f = tan A - A, f' = tan^2 A
            double next = a - delta;
            if (!(next > lo && next < hi)) next = 0.5 * (a + (delta > 0 ? lo : hi));
            if (std::abs(next - a) < 1e-15 * a) {
                a = next;
                break;
            }
            a = next;
        }
        if (!(std::cos(a) > 0.0))
            throw std::runtime_error("tan_roots: root " + std::to_string(n) + " violates cos A > 0");
        roots.push_back(a);
    }
    return roots;
}

ThresholdTable thresholds(const ModelParams& p, std::size_t n_max) {
    p.validate();
    if (!(p.gamma0 > 0.0))
        throw std::invalid_argument("thresholds: gamma0 must be positive");

    const auto a = tan_roots(n_max + 1);
    ThresholdTable table;
    table.params = p;
    table.rows.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        auto& row = table.rows[n];
        row.n = n;
        row.a_n = a[n];
        if (n == 0) {
            row.eta_n = std::sqrt(p.omega / p.gamma0);
            row.e_n = p.gamma0;
            row.approx_eta_n = row.eta_n;
            row.approx_e_n = row.e_n;
        } else {
            const double c = std::cos(a[n]);
            row.eta_n = std::sqrt(p.omega / (p.gamma0 * c));
            row.e_n = p.gamma0 * c * (1.0 + 0.5 * a[n] * a[n]);
            row.approx_eta_n =
                std::sqrt(2.0 * kPi * p.omega * (static_cast<double>(n) + 0.25) / p.gamma0);
            row.approx_e_n = kPi * p.gamma0 * (static_cast<double>(n) + 0.25);
        }
    }
    return table;
}

double localized_energy(std::size_t n, double eta, const ModelParams& p) {
    p.validate();
    if (!(p.gamma0 > 0.0))
        throw std::invalid_argument("localized_energy: gamma0 must be positive");
    const auto table = thresholds(p, n);
    const double eta_n = table.rows[n].eta_n;
    if (eta < eta_n)
        throw BelowThreshold("localized_energy: eta = " + std::to_string(eta) +
                             " below threshold eta_" + std::to_string(n) + " = " +
                             std::to_string(eta_n));
    const double ratio = p.omega / (p.gamma0 * eta * eta);
    const double arc = std::acos(std::min(1.0, ratio));
    const double bracket = 2.0 * kPi * static_cast<double>(n) + arc;
    return 0.5 * p.omega / (eta * eta) * (bracket * bracket + 2.0);
}

std::vector<StationaryPoint> minima_structure(const ModelParams& p) {
    p.validate();
    std::vector<StationaryPoint> pts;

    const double curvature_scale = p.omega + p.gamma0 * p.eta * p.eta;
    const auto classify = [&](double x) {
        const double c = d2vh(x, p);
        StationaryKind kind = StationaryKind::inflection;
        if (c > 1e-9 * curvature_scale)
            kind = StationaryKind::minimum;
        else if (c < -1e-9 * curvature_scale)
            kind = StationaryKind::maximum;
        pts.push_back({x, vh(x, p), kind});
    };

    classify(0.0); // always stationary by parity
    if (p.eta <= 0.0 || p.gamma0 <= 0.0) return pts;

    const double x_cut = p.gamma0 * p.eta * p.eta / p.omega + 2.0 * kPi / p.eta;
    const double step = std::min(0.02, kPi / (50.0 * p.eta));
    double x_prev = step;
    double f_prev = dvh(x_prev, p);
    for (double x = 2.0 * step; x <= x_cut; x += step) {
        const double f = dvh(x, p);
        if ((f_prev <= 0.0 && f > 0.0) || (f_prev > 0.0 && f <= 0.0)) {
            const auto g = [&](double t) { return dvh(t, p); };
            classify(bisect(g, x_prev, x, f_prev));
        }
        x_prev = x;
        f_prev = f;
    }
    return pts;
}

std::vector<IntegerCrossing> integer_crossings(const ModelParams& p, double e_min, double e_max) {
    if (!(e_max > e_min)) throw std::invalid_argument("integer_crossings: need e_max > e_min");
    std::vector<IntegerCrossing> out;

    const auto phase_or_floor = [&](double e) {
        try {
            return bs_phase(e, p);
        } catch (const NoClassicalRegion&) {
            return -0.5;
        }
    };
    const auto turning_or_zero = [&](double e) {
        try {
            return turning_point(e, p);
        } catch (const NoClassicalRegion&) {
            return 0.0;
        }
    };

    // n(E) is monotone between cuts, so bisection on n - m finds every
    // crossing; when m falls inside a jump the bisection converges onto the
    // cut energy itself, which the turning-point discontinuity identifies
    const double cut_gap = 0.25 * kPi / std::max(p.eta, 1.0);
    const double step = std::min(0.02, (e_max - e_min) / 64.0);
    double e_prev = e_min;
    double n_prev = phase_or_floor(e_prev);
    for (double e = e_min + step; e_prev < e_max; e += step) {
        e = std::min(e, e_max);
        const double n_cur = phase_or_floor(e);
        for (int m = static_cast<int>(std::floor(n_prev)) + 1;
             m <= static_cast<int>(std::floor(n_cur)); ++m) {
            const auto g = [&](double t) { return phase_or_floor(t) - m; };
            const double at = bisect(g, e_prev, e, n_prev - m);
            const bool jumped =
                std::abs(turning_or_zero(at + 1e-7) - turning_or_zero(at - 1e-7)) > cut_gap;
            out.push_back({at, m, jumped});
        }
        e_prev = e;
        n_prev = n_cur;
        if (e >= e_max) break;
    }
    return out;
}

} // namespace ovib::qc
