#include "stirling/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>

namespace stirling {

namespace {

// One tanh-sinh abscissa: position t = tanh((pi/2) sinh(kh)) stored with its distance to
// the endpoint (delta = 1 - t, computed without cancellation) and weight.
struct ts_node {
    hp_real t;
    hp_real delta;
    hp_real w;
};

// Per-level node lists for one working precision.  Level 0 holds k = 0,1,2,...; level L>0
// holds the odd multiples of h = 2^-L only, so refinements reuse earlier evaluations.
struct ts_table {
    long digits = 0;
    hp_real u_max;
    // deque keeps references to built levels stable while new levels append
    std::deque<std::vector<ts_node>> levels;
};

ts_node make_node(const hp_real& u, long d) {
    hp_real half_pi = const_pi(d) / hp_real::from_si(2, d);
    hp_real sh(d), ch(d);
    mpfr_sinh_cosh(sh.raw(), ch.raw(), u.raw(), MPFR_RNDN);
    hp_real q = half_pi * sh;
    ts_node n;
    n.t = tanh(q);
    // 1 - tanh(q) = 2 / (e^{2q} + 1), stable for large q.
    hp_real e2q = exp(q + q);
    n.delta = hp_real::from_si(2, d) / (e2q + hp_real::from_si(1, d));
    hp_real chq(d);
    mpfr_cosh(chq.raw(), q.raw(), MPFR_RNDN);
    n.w = half_pi * ch / (chq * chq);
    return n;
}

std::mutex table_mutex;
std::map<long, ts_table> tables;

const std::vector<ts_node>& level_nodes(long digits, int level) {
    std::lock_guard<std::mutex> lock(table_mutex);
    ts_table& tb = tables[digits];
    if (tb.digits == 0) {
        tb.digits = digits;
        // Truncate the grid where 1-t underflows the working tolerance.
        double target = (static_cast<double>(digits) + 12.0) * 2.302585092994046;
        double sh = (target + 0.6931) / 1.5707963267948966;
        double um = std::log(sh + std::sqrt(sh * sh + 1.0));
        tb.u_max = hp_real::from_string(std::to_string(um + 0.1), digits);
    }
    while (static_cast<int>(tb.levels.size()) <= level) {
        int L = static_cast<int>(tb.levels.size());
        std::vector<ts_node> nodes;
        hp_real h = pow_si(hp_real::from_si(2, digits), -L);
        long k = (L == 0) ? 0 : 1;
        long step = (L == 0) ? 1 : 2;
        for (;; k += step) {
            hp_real u = hp_real::from_si(k, digits) * h;
            if (cmp(u, tb.u_max) > 0) break;
            nodes.push_back(make_node(u, digits));
        }
        tb.levels.push_back(std::move(nodes));
    }
    return tb.levels[static_cast<size_t>(level)];
}

// Value-type shims so the core works for hp_real and hp_complex alike.
inline hp_real vzero(long d, const hp_real*) { return hp_real::from_si(0, d); }
inline hp_complex vzero(long d, const hp_complex*) {
    return hp_complex::from_real(hp_real::from_si(0, d));
}
inline hp_real vabs(const hp_real& x) { return abs(x); }
inline hp_real vabs(const hp_complex& x) { return abs(x); }

template <class T>
using fn_of = std::function<T(const hp_real&)>;

// Evaluate f over one finite panel [a, b] with level-doubling until successive estimates
// agree to tol.  Node positions near either endpoint are formed from delta, keeping the
// distance to the endpoint fully accurate.
template <class T>
T ts_panel(const fn_of<T>& f, const hp_real& a, const hp_real& b, const quad_options& opt,
           const hp_real& tol, hp_real* err_out) {
    long d = opt.digits;
    hp_real two = hp_real::from_si(2, d);
    hp_real r = (b - a) / two;
    hp_real m = (a + b) / two;
    T sum = vzero(d, static_cast<T*>(nullptr));
    T prev = sum;
    hp_real prev_diff(d);
    bool have_prev = false, have_prev_diff = false;
    hp_real h = hp_real::from_si(1, d);
    for (int L = 0; L <= opt.max_level; ++L) {
        for (const ts_node& n : level_nodes(d, L)) {
            if (L == 0 && n.t.is_zero()) {
                sum = sum + f(m) * n.w;
                continue;
            }
            hp_real x_hi = b - r * n.delta;
            hp_real x_lo = a + r * n.delta;
            sum = sum + (f(x_hi) + f(x_lo)) * n.w;
        }
        if (L > 0) h = h / two;
        T est = sum * (r * h);
        if (have_prev) {
            hp_real diff = vabs(est - prev);
            // Error model: tanh-sinh roughly squares the error per level, so
            // diff^2/prev_diff estimates the true error once two diffs exist.
            hp_real err = diff;
            if (have_prev_diff && !prev_diff.is_zero() && cmp(diff, prev_diff) < 0)
                err = diff * diff / prev_diff;
            if (L >= opt.min_level && cmp(err, tol) <= 0) {
                if (err_out != nullptr) *err_out = err;
                return est;
            }
            prev_diff = diff;
            have_prev_diff = true;
        }
        prev = est;
        have_prev = true;
    }
    throw non_convergence("quadrature panel failed to settle by level cap");
}

template <class T>
T integrate_core(const fn_of<T>& f, const panel_scheme& ps, const quad_options& opt,
                 hp_real* err_out) {
    long d = opt.digits;
    if (ps.points.empty()) throw domain_error("panel scheme needs at least one breakpoint");
    size_t panel_count = ps.points.size() - 1 + (ps.tail ? 1 : 0);
    if (panel_count == 0) throw domain_error("panel scheme spans no panels");
    hp_real tol = pow10(opt.tol_exp10, d) / hp_real::from_si(static_cast<long>(panel_count), d);
    T total = vzero(d, static_cast<T*>(nullptr));
    hp_real err_acc = hp_real::from_si(0, d);
    hp_real perr(d);
    hp_real one = hp_real::from_si(1, d);
    if (ps.tail) {
        // Divergence probe up front: a growing integrand should fail as such, not as a
        // panel that never settles.
        const hp_real& b = ps.points.back();
        hp_real p1 = vabs(f(b + one));
        hp_real p2 = vabs(f(b + hp_real::from_si(20, d)));
        hp_real p3 = vabs(f(b + hp_real::from_si(400, d)));
        if (cmp(p3, p2) > 0 && cmp(p2, p1) > 0 && cmp(p3, tol) > 0)
            throw divergent_tail("integrand grows along the semi-infinite tail");
    }
    for (size_t i = 0; i + 1 < ps.points.size(); ++i) {
        total = total + ts_panel<T>(f, ps.points[i], ps.points[i + 1], opt, tol, &perr);
        err_acc = err_acc + perr;
    }
    if (ps.tail) {
        const hp_real& b = ps.points.back();
        // y = b + (1-v)/v maps (0,1] onto [b, inf); the singular end sits at v = 0 where
        // node positions are exact, so no cancellation enters the map.
        fn_of<T> mapped = [&](const hp_real& v) -> T {
            hp_real y = b + (one - v) / v;
            return f(y) / (v * v);
        };
        total = total + ts_panel<T>(mapped, hp_real::from_si(0, d), one, opt, tol, &perr);
        err_acc = err_acc + perr;
    }
    if (err_out != nullptr) *err_out = err_acc;
    return total;
}

// Scheme breakpoints with the pole zone (pole-h, pole+h) removed; a breakpoint sitting on
// the pole is nudged outward (the breakpoint moves, the singularity does not).
std::vector<hp_real> points_outside_zone(const std::vector<hp_real>& pts, const hp_real& pole,
                                         const hp_real& h) {
    std::vector<hp_real> out;
    long d = pole.digits();
    hp_real lo = pole - h;
    hp_real hi = pole + h;
    for (const hp_real& p0 : pts) {
        hp_real p = p0;
        if (cmp(abs(p - pole), h / hp_real::from_si(4, d)) < 0) p = pole + h + h;
        if (cmp(p, lo) < 0 || cmp(p, hi) > 0) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [](const hp_real& x, const hp_real& y) { return x < y; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const hp_real& x, const hp_real& y) { return cmp(x, y) == 0; }),
              out.end());
    return out;
}

// Shared layout for the principal-value and finite-part drivers: a mirrored zone of
// half-width h around the pole plus regular panels for the rest.
struct pole_layout {
    hp_real h;
    std::vector<hp_real> below;  // breakpoints < pole-h, then pole-h appended
    std::vector<hp_real> above;  // pole+h, then breakpoints > pole+h
};

pole_layout make_pole_layout(const panel_scheme& ps, const hp_real& pole, long d) {
    if (pole.sign() <= 0) throw domain_error("pole must lie inside the integration range");
    pole_layout lay;
    lay.h = hp_real::from_si(1, d);
    for (const hp_real& p : ps.points) {
        hp_real dist = abs(p - pole);
        if (!dist.is_zero() && cmp(dist, lay.h) < 0) lay.h = dist;
    }
    std::vector<hp_real> pts = points_outside_zone(ps.points, pole, lay.h);
    for (const hp_real& p : pts) (cmp(p, pole) < 0 ? lay.below : lay.above).push_back(p);
    lay.below.push_back(pole - lay.h);
    lay.above.insert(lay.above.begin(), pole + lay.h);
    return lay;
}

template <class T>
T pv_core(const fn_of<T>& f, const hp_real& pole, const panel_scheme& ps,
          const quad_options& opt, hp_real* err_out) {
    long d = opt.digits;
    pole_layout lay = make_pole_layout(ps, pole, d);

    // Mirrored nodes: int_0^h [f(pole+u) + f(pole-u)] du.  The sum cancels the simple
    // pole; each side is ~g(pole)/u, so evaluations run at doubled precision and nodes
    // below the contribution floor are dropped.
    quad_options sym_opt = opt;
    sym_opt.digits = 2 * d + 20;
    hp_real floor_u = pow10(-(d + 10), sym_opt.digits);
    hp_real pole_hi = at_digits(pole, sym_opt.digits);
    fn_of<T> sym = [&](const hp_real& u) -> T {
        if (cmp(u, floor_u) < 0) return vzero(sym_opt.digits, static_cast<T*>(nullptr));
        return f(pole_hi + u) + f(pole_hi - u);
    };
    hp_real tol = pow10(opt.tol_exp10, d);
    hp_real perr(d);
    T total = ts_panel<T>(sym, hp_real::from_si(0, sym_opt.digits),
                          at_digits(lay.h, sym_opt.digits), sym_opt, tol, &perr);
    total = at_digits(total, d);
    hp_real err_acc = perr;

    if (lay.below.size() > 1) {
        total = total + integrate_core<T>(f, panel_scheme{lay.below, false}, opt, &perr);
        err_acc = err_acc + perr;
    }
    total = total + integrate_core<T>(f, panel_scheme{lay.above, ps.tail}, opt, &perr);
    err_acc = err_acc + perr;
    if (err_out != nullptr) *err_out = err_acc;
    return total;
}

// Finite part for a double pole: zone integrand (phi(p+u)+phi(p-u)-2 phi(p))/u^2 plus the
// boundary term -2 phi(p)/h; regular panels integrate phi(y)/(y-p)^2 directly.
template <class T>
T fp_core(const fn_of<T>& phi, const hp_real& pole, const panel_scheme& ps,
          const quad_options& opt) {
    long d = opt.digits;
    pole_layout lay = make_pole_layout(ps, pole, d);

    quad_options sym_opt = opt;
    sym_opt.digits = 2 * d + 20;
    hp_real floor_u = pow10(-(d + 10), sym_opt.digits);
    hp_real pole_hi = at_digits(pole, sym_opt.digits);
    T phi0 = phi(pole_hi);
    T two_phi0 = phi0 + phi0;
    fn_of<T> sym = [&](const hp_real& u) -> T {
        if (cmp(u, floor_u) < 0) return vzero(sym_opt.digits, static_cast<T*>(nullptr));
        return (phi(pole_hi + u) + phi(pole_hi - u) - two_phi0) / (u * u);
    };
    hp_real tol = pow10(opt.tol_exp10, d);
    T total = ts_panel<T>(sym, hp_real::from_si(0, sym_opt.digits),
                          at_digits(lay.h, sym_opt.digits), sym_opt, tol, nullptr);
    total = total - two_phi0 / at_digits(lay.h, sym_opt.digits);
    total = at_digits(total, d);

    fn_of<T> full = [&](const hp_real& y) -> T {
        hp_real dy = y - pole;
        return phi(y) / (dy * dy);
    };
    if (lay.below.size() > 1)
        total = total + integrate_core<T>(full, panel_scheme{lay.below, false}, opt, nullptr);
    total = total + integrate_core<T>(full, panel_scheme{lay.above, ps.tail}, opt, nullptr);
    return total;
}

}  // namespace

panel_scheme panel_scheme::standard(long digits) {
    panel_scheme ps;
    auto add = [&](long num, long den) {
        ps.points.push_back(hp_real::from_rational(mpq_class(num, den), digits));
    };
    add(0, 1);
    add(1, 2);
    add(1, 1);
    add(2, 1);
    add(5, 1);
    add(10, 1);
    add(100, 1);
    add(1000, 1);
    ps.tail = true;
    return ps;
}

panel_scheme panel_scheme::with_points(long digits, const std::vector<hp_real>& extra) {
    panel_scheme ps = standard(digits);
    for (const hp_real& e : extra)
        if (e.sign() > 0) ps.points.push_back(e);
    std::sort(ps.points.begin(), ps.points.end(),
              [](const hp_real& x, const hp_real& y) { return x < y; });
    ps.points.erase(std::unique(ps.points.begin(), ps.points.end(),
                                [](const hp_real& x, const hp_real& y) { return cmp(x, y) == 0; }),
                    ps.points.end());
    return ps;
}

hp_real integrate(const real_fn& f, const panel_scheme& ps, const quad_options& opt,
                  hp_real* err_out) {
    return integrate_core<hp_real>(f, ps, opt, err_out);
}

hp_complex integrate(const complex_fn& f, const panel_scheme& ps, const quad_options& opt,
                     hp_real* err_out) {
    return integrate_core<hp_complex>(f, ps, opt, err_out);
}

hp_real integrate_principal_value(const real_fn& f, const hp_real& pole, const panel_scheme& ps,
                                  const quad_options& opt, hp_real* err_out) {
    return pv_core<hp_real>(f, pole, ps, opt, err_out);
}

hp_complex integrate_principal_value(const complex_fn& f, const hp_real& pole,
                                     const panel_scheme& ps, const quad_options& opt,
                                     hp_real* err_out) {
    return pv_core<hp_complex>(f, pole, ps, opt, err_out);
}

hp_real integrate_finite_part(const real_fn& phi, const hp_real& pole, const panel_scheme& ps,
                              const quad_options& opt) {
    return fp_core<hp_real>(phi, pole, ps, opt);
}

hp_complex integrate_finite_part(const complex_fn& phi, const hp_real& pole,
                                 const panel_scheme& ps, const quad_options& opt) {
    return fp_core<hp_complex>(phi, pole, ps, opt);
}

hp_complex integrate_vertical_line(const contour_fn& g, const hp_real& c, const panel_scheme& ps,
                                   const quad_options& opt, hp_real* err_out) {
    long d = opt.digits;
    hp_real zero = hp_real::from_si(0, d);
    hp_complex i_unit{zero, hp_real::from_si(1, d)};
    hp_real err_acc = zero;
    hp_real perr(d);
    hp_complex total = hp_complex::from_real(zero);
    for (int dir : {+1, -1}) {
        complex_fn half = [&, dir](const hp_real& t) -> hp_complex {
            hp_real tt = (dir > 0) ? t : -t;
            return i_unit * g(hp_complex{c, tt});
        };
        total = total + integrate(half, ps, opt, &perr);
        err_acc = err_acc + perr;
    }
    if (err_out != nullptr) *err_out = err_acc;
    return total;
}

}  // namespace stirling
