#include "wrem/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "wrem/errors.hpp"

namespace wrem {

// ---------------------------------------------------------------- RectIndex

std::uint64_t RectIndex::key(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
}

RectIndex::Level& RectIndex::level_for(double side) {
    int e = 0;
    std::frexp(side, &e);  // side < 2^e
    auto it = levels_.find(e);
    if (it == levels_.end()) {
        Level l;
        l.cell = std::ldexp(1.0, e);
        it = levels_.emplace(e, std::move(l)).first;
    }
    return it->second;
}

void RectIndex::insert(std::uint32_t id, const Rect& r) {
    auto pos = static_cast<std::uint32_t>(rects_.size());
    rects_.push_back(r);
    ids_.push_back(id);
    stamp_.push_back(0);
    Level& l = level_for(std::max(r.width(), r.height()));
    l.members.push_back(pos);
    auto i0 = static_cast<std::int64_t>(std::floor(r.x0 / l.cell)), i1 = static_cast<std::int64_t>(std::floor(r.x1 / l.cell));
    auto j0 = static_cast<std::int64_t>(std::floor(r.y0 / l.cell)), j1 = static_cast<std::int64_t>(std::floor(r.y1 / l.cell));
    for (auto j = j0; j <= j1; ++j)
        for (auto i = i0; i <= i1; ++i) l.bins[key(i, j)].push_back(pos);
}

void RectIndex::query(const Rect& q, std::vector<std::uint32_t>& out) const {
    out.clear();
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    for (auto& [e, l] : levels_) {
        auto i0 = static_cast<std::int64_t>(std::floor(q.x0 / l.cell)), i1 = static_cast<std::int64_t>(std::floor(q.x1 / l.cell));
        auto j0 = static_cast<std::int64_t>(std::floor(q.y0 / l.cell)), j1 = static_cast<std::int64_t>(std::floor(q.y1 / l.cell));
        double nb = static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1);
        auto consider = [&](std::uint32_t pos) {
            if (stamp_[pos] == epoch_) return;
            stamp_[pos] = epoch_;
            if (interiors_meet(rects_[pos], q)) out.push_back(ids_[pos]);
        };
        if (nb > static_cast<double>(l.members.size())) {
            for (auto pos : l.members) consider(pos);
            continue;
        }
        for (auto j = j0; j <= j1; ++j)
            for (auto i = i0; i <= i1; ++i) {
                auto it = l.bins.find(key(i, j));
                if (it == l.bins.end()) continue;
                for (auto pos : it->second) consider(pos);
            }
    }
    std::sort(out.begin(), out.end());
}

void RectIndex::query(Point p, std::vector<std::uint32_t>& out) const {
    out.clear();
    for (auto& [e, l] : levels_) {
        auto it = l.bins.find(key(static_cast<std::int64_t>(std::floor(p[0] / l.cell)),
                                  static_cast<std::int64_t>(std::floor(p[1] / l.cell))));
        if (it == l.bins.end()) continue;
        for (auto pos : it->second)
            if (rects_[pos].contains_closed(p)) out.push_back(ids_[pos]);
    }
    std::sort(out.begin(), out.end());
}

// ---------------------------------------------------------------- construction

SquareAnnulus WhitneyDecomposition::target() const {
    if (half_mode) return {center, 0.0, a};
    return {center, a - ring.width(), a};
}

SquareAnnulus WhitneyDecomposition::source() const { return {center, a, source_outer}; }

double WhitneyDecomposition::interface_distance(const Rect& r) const {
    double m = std::max({std::abs(r.x0 - center[0]), std::abs(r.x1 - center[0]), std::abs(r.y0 - center[1]),
                         std::abs(r.y1 - center[1])});
    return a - m;
}

namespace {

double target_area(const WhitneyDecomposition& d) { return d.target().area(); }

void build_layers(WhitneyDecomposition& d) {
    const WhitneyOptions& o = d.options;
    const double tarea = target_area(d);
    int L = 1;
    for (;; ++L) {
        double sf = std::ldexp(d.s0, -(L - 1));
        double strip = 4.0 * (d.a * d.a - (d.a - sf) * (d.a - sf));
        if (strip <= std::ldexp(tarea, -o.i_cap)) {
            d.strip_area = strip;
            break;
        }
        if (L > 60) throw ResourceError("whitney: truncation depth exceeded 60 layers");
    }
    d.layers = L;
    // cube count: sum_i 4(m_i - 1) plus the final row
    double count = 0.0;
    for (int i = 0; i < L; ++i) count += 4.0 * (d.n0 * std::ldexp(1.0, i) - 3.0);
    count += 4.0 * (d.n0 * std::ldexp(1.0, L - 1) - 1.0);
    if (count > static_cast<double>(o.max_cubes))
        throw ResourceError("whitney: decomposition needs " + std::to_string(static_cast<long long>(count)) +
                            " cubes, cap is " + std::to_string(o.max_cubes));

    // integer lattice of unit u = s_final / 2: every edge is center + k*u
    const double u = std::ldexp(d.s0, -L);
    const std::int64_t A_int = static_cast<std::int64_t>(d.n0) << (L - 1);  // a / u
    const double be = d.a - d.depth;
    auto emit_row = [&](std::int64_t side_int, std::int64_t outer_int, int layer, bool final_layer) {
        std::int64_t m = 2 * outer_int / side_int;
        for (std::int64_t l = 0; l < m; ++l)
            for (std::int64_t k = 0; k < m; ++k) {
                if (!(k == 0 || l == 0 || k == m - 1 || l == m - 1)) continue;
                std::int64_t ix = -outer_int + k * side_int, iy = -outer_int + l * side_int;
                WhitneyCube c;
                c.cube = {d.center[0] + static_cast<double>(ix) * u, d.center[1] + static_cast<double>(iy) * u,
                          d.center[0] + static_cast<double>(ix + side_int) * u,
                          d.center[1] + static_cast<double>(iy + side_int) * u};
                c.side = static_cast<double>(side_int) * u;
                c.layer = layer;
                c.final_layer = final_layer;
                Point cc = c.cube.center();
                double rx = std::abs(cc[0] - d.center[0]), ry = std::abs(cc[1] - d.center[1]);
                c.zone = (rx > be && ry > be) ? Zone::corner : Zone::face;
                d.cubes.push_back(c);
            }
    };
    for (int i = 0; i < L; ++i) {
        std::int64_t side_int = std::int64_t{1} << (L - i);
        emit_row(side_int, A_int - side_int, i, false);
    }
    emit_row(2, A_int, L, true);

    d.cubes.shrink_to_fit();
    d.neighbors.assign(d.cubes.size(), {});
    for (std::uint32_t j = 0; j < d.cubes.size(); ++j) {
        d.cube_index.insert(j, d.cubes[j].cube);
        d.kappa_index.insert(j, d.cubes[j].cube.dilated(o.kappa));
    }
    for (std::uint32_t j0 = 0; j0 < d.cubes.size(); ++j0) d.kappa_index.query(d.cubes[j0].cube, d.neighbors[j0]);
}

void check_options(const WhitneyOptions& o) {
    if (!(o.kappa > 1.0)) throw ValidationError("whitney: kappa must exceed 1");
    if (o.i_cap < 1) throw ValidationError("whitney: i_cap must be >= 1");
    if (!(o.connector_dilation >= 1.0)) throw ValidationError("whitney: connector dilation must be >= 1");
}

} // namespace

WhitneyDecomposition decompose(const Ring& ring, const WhitneyOptions& opt) {
    check_options(opt);
    if (!(ring.alpha > 0.0 && ring.alpha < 0.5)) throw ValidationError("decompose needs 0 < alpha < 1/2");
    WhitneyDecomposition d;
    d.ring = ring;
    d.options = opt;
    d.center = ring.cube.center;
    d.a = ring.inner_half();
    d.source_outer = ring.cube.half();
    const double W = ring.width();
    const double nominal = 4.0 * d.a / W;
    const double r = std::round(nominal);
    if (std::abs(nominal - r) <= opt.snap_tol * nominal) {
        d.n0 = static_cast<int>(r);
    } else {
        d.n0 = static_cast<int>(std::floor(nominal));
        d.snapped = true;
    }
    d.s0 = 2.0 * d.a / d.n0;
    d.depth = 2.0 * d.s0;
    d.overhang = std::max(0.0, d.depth - W);
    if (d.snapped)
        d.flags.push_back("4a/W not integral: layer-0 side snapped up, cubes overhang R' inward by " +
                          std::to_string(d.overhang));
    build_layers(d);
    return d;
}

WhitneyDecomposition decompose_interior(const Ring& ring, const WhitneyOptions& opt) {
    check_options(opt);
    if (!(ring.alpha >= 0.5 && ring.alpha < 1.0)) throw ValidationError("decompose_interior needs 1/2 <= alpha < 1");
    WhitneyDecomposition d;
    d.ring = ring;
    d.options = opt;
    d.half_mode = true;
    d.center = ring.cube.center;
    d.a = ring.inner_half();
    d.source_outer = ring.cube.half();
    d.n0 = 4;
    d.s0 = 0.5 * d.a;
    d.depth = d.a;
    build_layers(d);
    return d;
}

// ---------------------------------------------------------------- reflection

void reflect(WhitneyDecomposition& d) {
    const SquareAnnulus src = d.source();
    const double be = d.a - d.depth;
    const double tol = 1e-12 * d.ring.cube.side;
    std::size_t shrunk = 0;
    for (auto& c : d.cubes) {
        Point p = c.cube.center();
        double x = p[0] - d.center[0], y = p[1] - d.center[1];
        double dist = d.a - std::max(std::abs(x), std::abs(y));
        double dd = dist + (c.final_layer ? c.side : 0.0);
        Point img;
        if (c.zone == Zone::face) {
            if (std::abs(x) >= std::abs(y)) img = {std::copysign(d.a + dd, x), y};
            else img = {x, std::copysign(d.a + dd, y)};
        } else {
            double yx = std::abs(x) - be, yy = std::abs(y) - be;
            double rho = std::max(yx, yy);
            double f = (d.depth + dd) / rho;
            img = {std::copysign(be + yx * f, x), std::copysign(be + yy * f, y)};
        }
        double side = c.side;
        double rho_img = std::max(std::abs(img[0]), std::abs(img[1]));
        if (rho_img + 0.5 * side > src.outer + tol) {
            side = 2.0 * (src.outer - rho_img);
            if (!(side > 0.0) || rho_img - 0.5 * side < d.a - tol) {
                // recenter halfway across the ring along the same ray
                double target = 0.5 * (d.a + src.outer);
                img = {img[0] * target / rho_img, img[1] * target / rho_img};
                side = std::min(c.side, src.outer - d.a);
            }
            c.shrunk = true;
            ++shrunk;
        }
        c.reflected = Rect::square({d.center[0] + img[0], d.center[1] + img[1]}, side);
        c.has_reflection = true;
    }
    if (shrunk) d.flags.push_back(std::to_string(shrunk) + " reflected cubes shrunk to fit inside R");
}

// ---------------------------------------------------------------- connectors

namespace {

// Places [out, out + t] inside [A0, A1] around [u0, u1]. push < 0 / > 0 moves it as far
// down / up as allowed (away from the interface), 0 centers it.
bool fit_interval(double u0, double u1, double t, double A0, double A1, int push, double& out) {
    double lo = std::max(u1 - t, A0), hi = std::min(u0, A1 - t);
    double eps = 1e-12 * std::max(1.0, std::abs(A1 - A0));
    if (lo > hi + eps) return false;
    hi = std::max(lo, hi);
    if (push < 0) out = lo;
    else if (push > 0) out = hi;
    else out = std::clamp(0.5 * (u0 + u1) - 0.5 * t, lo, hi);
    return true;
}

// r minus the open hole (-a,a)^2 around (cx,cy) splits when r crosses the hole in one direction only
bool clipped_connected(const Rect& r, double cx, double cy, double a) {
    double x0 = r.x0 - cx, x1 = r.x1 - cx, y0 = r.y0 - cy, y1 = r.y1 - cy;
    bool x_inside = x0 > -a && x1 < a, y_inside = y0 > -a && y1 < a;
    bool x_across = x0 < -a && x1 > a, y_across = y0 < -a && y1 > a;
    if (x_inside && y_inside) return false;
    return !((x_inside && y_across) || (y_inside && x_across));
}

} // namespace

void connectors(WhitneyDecomposition& d) {
    const SquareAnnulus src = d.source();
    const double tol = 1e-12 * d.ring.cube.side;
    const double cx = d.center[0], cy = d.center[1], a = d.a, o = src.outer;
    const Rect arms[4] = {{cx + a, cy - o, cx + o, cy + o},
                          {cx - o, cy - o, cx - a, cy + o},
                          {cx - o, cy + a, cx + o, cy + o},
                          {cx - o, cy - o, cx + o, cy - a}};
    const int push_x[4] = {1, -1, 0, 0}, push_y[4] = {0, 0, 1, -1};
    d.connectors.clear();
    std::size_t failures = 0, clipped = 0;
    for (std::uint32_t j0 = 0; j0 < d.cubes.size(); ++j0) {
        if (!d.cubes[j0].has_reflection) throw ValidationError("connectors: call reflect first");
        for (std::uint32_t j : d.neighbors[j0]) {
            const Rect& r1 = d.cubes[j].reflected;
            const Rect& r0 = d.cubes[j0].reflected;
            Rect bb{std::min(r1.x0, r0.x0), std::min(r1.y0, r0.y0), std::max(r1.x1, r0.x1), std::max(r1.y1, r0.y1)};
            double t = std::max(bb.width(), bb.height());
            Rect sq = Rect::square(bb.center(), t);
            Connector c{j, j0, sq.dilated(d.options.connector_dilation), true, false};
            if (!src.contains_closed(c.t, tol)) {
                c.t = sq;
                if (!src.contains_closed(sq, tol)) {
                    bool placed = false;
                    for (int k = 0; k < 4; ++k) {
                        const Rect& arm = arms[k];
                        double px, py;
                        if (fit_interval(bb.x0, bb.x1, t, arm.x0, arm.x1, push_x[k], px) &&
                            fit_interval(bb.y0, bb.y1, t, arm.y0, arm.y1, push_y[k], py)) {
                            c.t = {px, py, px + t, py + t};
                            placed = true;
                            break;
                        }
                    }
                    c.shifted = placed;
                    if (!placed) {
                        // keep the square and use its part inside R; usable while that part is connected
                        c.clipped = true;
                        c.contained = clipped_connected(sq, cx, cy, a);
                        ++clipped;
                        if (!c.contained) ++failures;
                    }
                }
            }
            d.connectors.push_back(c);
        }
    }
    if (clipped) d.flags.push_back(std::to_string(clipped) + " connectors clipped to R (corner pairs)");
    if (failures) d.flags.push_back(std::to_string(failures) + " clipped connectors are disconnected inside R");
}

// ---------------------------------------------------------------- stats

WhitneyStats compute_stats(const WhitneyDecomposition& d, std::size_t samples) {
    WhitneyStats s;
    s.cubes = d.cubes.size();
    s.layers = d.layers;
    s.final_side = d.cubes.empty() ? 0.0 : d.cubes.back().side;
    s.strip_area = d.strip_area;
    const SquareAnnulus tgt = d.target(), src = d.source();
    s.target_area = tgt.area();
    const double tol = 1e-12 * d.ring.cube.side;

    double covered = 0.0;
    for (auto& c : d.cubes) {
        covered += tgt.clipped_area(c.cube);
        if (!tgt.contains_closed(c.cube, tol) && !(d.half_mode && Rect::from_cube(d.ring.inner_cube()).contains(c.cube, tol)))
            ++s.cubes_outside;
        if (c.shrunk) ++s.shrunk;
        if (c.has_reflection && !src.contains_closed(c.reflected, tol)) ++s.reflected_outside;
    }
    s.coverage_defect = std::max(0.0, s.target_area - covered);

    s.b1_size_min = s.b1_dist_min = 1e300;
    for (std::uint32_t j0 = 0; j0 < d.cubes.size(); ++j0) {
        const auto& c0 = d.cubes[j0];
        for (auto j : d.neighbors[j0]) {
            if (j == j0) continue;
            s.max_pair_overlap = std::max(s.max_pair_overlap, overlap_area(c0.cube, d.cubes[j].cube));
            s.a2_ratio = std::max(s.a2_ratio, d.cubes[j].side / c0.side);
        }
        if (!c0.final_layer) s.a3_constant = std::max(s.a3_constant, c0.cube.diam() / d.interface_distance(c0.cube));
        if (c0.has_reflection) {
            double sr = c0.reflected.diam() / c0.cube.diam();
            double dr = euclid_dist(c0.cube, c0.reflected) / c0.cube.diam();
            s.b1_size_min = std::min(s.b1_size_min, sr);
            s.b1_size_max = std::max(s.b1_size_max, sr);
            s.b1_dist_min = std::min(s.b1_dist_min, dr);
            s.b1_dist_max = std::max(s.b1_dist_max, dr);
        }
    }
    if (s.b1_size_min > 1e299) s.b1_size_min = s.b1_dist_min = 0.0;

    RectIndex tindex;
    for (std::uint32_t k = 0; k < d.connectors.size(); ++k) {
        const auto& c = d.connectors[k];
        const Rect& r0 = d.cubes[c.j0].reflected;
        s.b2_star_ratio = std::max(s.b2_star_ratio, d.cubes[c.j].reflected.diam() / r0.diam());
        s.b2_t_ratio = std::max(s.b2_t_ratio, c.t.diam() / r0.diam());
        if (!c.contained) ++s.connector_failures;
        if (c.shifted) ++s.connector_shifted;
        if (c.clipped) ++s.connector_clipped;
        tindex.insert(k, c.t);
    }

    const Cube& q = d.ring.cube;
    const double h = q.side / static_cast<double>(samples);
    std::vector<std::uint32_t> hits;
    for (std::size_t jy = 0; jy < samples; ++jy)
        for (std::size_t ix = 0; ix < samples; ++ix) {
            Point p{q.center[0] - q.half() + (static_cast<double>(ix) + 0.5) * h,
                    q.center[1] - q.half() + (static_cast<double>(jy) + 0.5) * h};
            d.kappa_index.query(p, hits);
            s.a4_overlap = std::max(s.a4_overlap, static_cast<int>(hits.size()));
            if (!d.connectors.empty() && src.contains(p)) {
                tindex.query(p, hits);
                s.b3_overlap = std::max(s.b3_overlap, static_cast<int>(hits.size()));
            }
        }
    return s;
}

// ---------------------------------------------------------------- bumps

BumpFamily::BumpFamily(const WhitneyDecomposition& dec) : dec_(&dec), kappa_(dec.options.kappa) {}

double BumpFamily::profile(double t, double kappa) {
    double a = std::abs(t), t0 = 1.0 / kappa;
    if (a <= t0) return 1.0;
    if (a >= 1.0) return 0.0;
    double r = (a - t0) / (1.0 - t0);
    return 1.0 - 3.0 * r * r + 2.0 * r * r * r;
}

double BumpFamily::profile_derivative(double t, double kappa) {
    double a = std::abs(t), t0 = 1.0 / kappa;
    if (a <= t0 || a >= 1.0) return 0.0;
    double r = (a - t0) / (1.0 - t0);
    double d = (-6.0 * r + 6.0 * r * r) / (1.0 - t0);
    return t < 0.0 ? -d : d;
}

double BumpFamily::evaluate(Point x, std::vector<BumpTerm>& out, bool with_gradient) const {
    thread_local std::vector<std::uint32_t> cand;
    dec_->kappa_index.query(x, cand);
    out.clear();
    double S = 0.0, Sx = 0.0, Sy = 0.0;
    for (auto j : cand) {
        const auto& c = dec_->cubes[j];
        Point cc = c.cube.center();
        double hr = 0.5 * kappa_ * c.side;
        double tx = (x[0] - cc[0]) / hr, ty = (x[1] - cc[1]) / hr;
        double px = profile(tx, kappa_), py = profile(ty, kappa_);
        double psi = px * py;
        if (psi <= 0.0) continue;
        double gx = 0.0, gy = 0.0;
        if (with_gradient) {
            gx = profile_derivative(tx, kappa_) * py / hr;
            gy = px * profile_derivative(ty, kappa_) / hr;
        }
        out.push_back({j, psi, gx, gy});
        S += psi;
        Sx += gx;
        Sy += gy;
    }
    if (S <= 0.0) return 0.0;
    for (auto& t : out) {
        if (with_gradient) {
            t.gx = (t.gx * S - t.phi * Sx) / (S * S);
            t.gy = (t.gy * S - t.phi * Sy) / (S * S);
        }
        t.phi /= S;
    }
    return S;
}

double BumpFamily::record_gradient_bounds(std::size_t per_side) {
    const auto& cubes = dec_->cubes;
    gradient_bound.assign(cubes.size(), 0.0);
    // sample coordinates in kappa-units: uniform lattice plus dense points where ramps live
    std::vector<double> ts;
    for (std::size_t k = 0; k < per_side; ++k) ts.push_back(-1.0 + (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(per_side));
    const double t0 = 1.0 / kappa_;
    for (int k = 0; k < 8; ++k) {
        double r = t0 + (1.0 - t0) * (k + 0.5) / 8.0;
        double inner = t0 - (1.0 - t0) * 2.0 * (k + 0.5) / 8.0;  // neighbor ramps reaching in
        for (double v : {r, -r, inner, -inner}) ts.push_back(v);
    }
    std::vector<BumpTerm> terms;
    const SquareAnnulus tgt = dec_->target();
    double worst = 0.0;
    for (std::uint32_t j = 0; j < cubes.size(); ++j) {
        Point cc = cubes[j].cube.center();
        double hr = 0.5 * kappa_ * cubes[j].side;
        double g = 0.0;
        for (double ty : ts)
            for (double tx : ts) {
                Point x{cc[0] + tx * hr, cc[1] + ty * hr};
                if (!tgt.contains_closed(x)) continue;
                evaluate(x, terms, true);
                for (auto& t : terms)
                    if (t.j == j) g = std::max(g, std::hypot(t.gx, t.gy));
            }
        gradient_bound[j] = g;
        worst = std::max(worst, g * cubes[j].cube.diam());
    }
    return worst;
}

double partition_defect(const BumpFamily& b, const WhitneyDecomposition& dec, std::size_t n) {
    const Cube& q = dec.ring.cube;
    const SquareAnnulus tgt = dec.target();
    const double h = q.side / static_cast<double>(n);
    std::vector<BumpTerm> terms;
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            Point p{q.center[0] - q.half() + (static_cast<double>(i) + 0.5) * h,
                    q.center[1] - q.half() + (static_cast<double>(j) + 0.5) * h};
            if (!tgt.contains(p)) continue;
            b.evaluate(p, terms, false);
            double s = 0.0;
            for (auto& t : terms) s += t.phi;
            worst = std::max(worst, std::abs(s - 1.0));
        }
    return worst;
}

// ---------------------------------------------------------------- json

namespace {
nlohmann::ordered_json rect_json(const Rect& r) { return nlohmann::ordered_json::array({r.x0, r.y0, r.x1, r.y1}); }
} // namespace

nlohmann::ordered_json to_json(const WhitneyDecomposition& d) {
    nlohmann::ordered_json j;
    j["ring"] = {{"center", {d.ring.cube.center[0], d.ring.cube.center[1]}},
                 {"side", d.ring.cube.side},
                 {"alpha", d.ring.alpha}};
    j["half_mode"] = d.half_mode;
    j["kappa"] = d.options.kappa;
    j["interface_half_width"] = d.a;
    j["depth"] = d.depth;
    j["layer0_side"] = d.s0;
    j["layers"] = d.layers;
    j["strip_area"] = d.strip_area;
    j["flags"] = d.flags;
    auto cubes = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < d.cubes.size(); ++k) {
        const auto& c = d.cubes[k];
        nlohmann::ordered_json e{{"id", k},
                                 {"cube", rect_json(c.cube)},
                                 {"layer", c.layer},
                                 {"final", c.final_layer},
                                 {"zone", c.zone == Zone::face ? "face" : "corner"}};
        if (c.has_reflection) {
            e["reflected"] = rect_json(c.reflected);
            e["shrunk"] = c.shrunk;
        }
        cubes.push_back(e);
    }
    j["cubes"] = cubes;
    auto cons = nlohmann::ordered_json::array();
    for (auto& c : d.connectors)
        cons.push_back({{"j", c.j}, {"j0", c.j0}, {"t", rect_json(c.t)}, {"contained", c.contained}, {"clipped", c.clipped}});
    j["connectors"] = cons;
    return j;
}

nlohmann::ordered_json to_json(const WhitneyStats& s) {
    return {{"cubes", s.cubes},
            {"layers", s.layers},
            {"final_side", s.final_side},
            {"target_area", s.target_area},
            {"strip_area", s.strip_area},
            {"coverage_defect", s.coverage_defect},
            {"max_pair_overlap", s.max_pair_overlap},
            {"a2_ratio", s.a2_ratio},
            {"a3_constant", s.a3_constant},
            {"a4_overlap", s.a4_overlap},
            {"b1_size_min", s.b1_size_min},
            {"b1_size_max", s.b1_size_max},
            {"b1_dist_min", s.b1_dist_min},
            {"b1_dist_max", s.b1_dist_max},
            {"b2_star_ratio", s.b2_star_ratio},
            {"b2_t_ratio", s.b2_t_ratio},
            {"b3_overlap", s.b3_overlap},
            {"shrunk", s.shrunk},
            {"connector_failures", s.connector_failures},
            {"connector_shifted", s.connector_shifted},
            {"connector_clipped", s.connector_clipped},
            {"reflected_outside", s.reflected_outside},
            {"cubes_outside", s.cubes_outside}};
}

} // namespace wrem
