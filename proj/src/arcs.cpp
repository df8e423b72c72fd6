#include "qwkb/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qwkb {

namespace {

/// Pairwise magnitude comparison signature at one grid column: for every pair
/// (a, b), -1 / 0 / +1 with 0 meaning "tied within tolerance".
std::vector<int> signature_at(const EigenGrid& g, std::size_t i, double tie_tol) {
    const int d = g.degree();
    std::vector<int> sig;
    sig.reserve(d * (d - 1) / 2);
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            double ma = std::abs(g.values()[a][i]), mb = std::abs(g.values()[b][i]);
            double scale = std::max({ma, mb, 1e-30});
            if (std::abs(ma - mb) < tie_tol * scale) sig.push_back(0);
            else sig.push_back(ma > mb ? 1 : -1);
        }
    }
    return sig;
}

std::vector<int> signature_at_t(const EigenGrid& g, double t, double tie_tol) {
    const int d = g.degree();
    std::vector<Complex> vals = g.branches_at(t);
    std::vector<int> sig;
    sig.reserve(d * (d - 1) / 2);
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            double ma = std::abs(vals[a]), mb = std::abs(vals[b]);
            double scale = std::max({ma, mb, 1e-30});
            if (std::abs(ma - mb) < tie_tol * scale) sig.push_back(0);
            else sig.push_back(ma > mb ? 1 : -1);
        }
    }
    return sig;
}

/// Treat isolated zeros (fewer than 3 consecutive grid points) as transversal
/// crossings, not ties: replace them by the sign they are crossing into.
void despeckle(std::vector<std::vector<int>>& sigs) {
    if (sigs.empty()) return;
    const std::size_t n = sigs.size(), m = sigs[0].size();
    for (std::size_t p = 0; p < m; ++p) {
        std::size_t i = 0;
        while (i < n) {
            if (sigs[i][p] != 0) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < n && sigs[j + 1][p] == 0) ++j;
            if (j - i + 1 < 3) {
                int left = i > 0 ? sigs[i - 1][p] : 0;
                int right = j + 1 < n ? sigs[j + 1][p] : 0;
                int fill = right != 0 ? right : left;
                for (std::size_t k = i; k <= j; ++k) sigs[k][p] = fill;
            }
            i = j + 1;
        }
    }
}

} // namespace

int ArcPartition::arc_index(double t) const {
    // breakpoint ties resolve to the left arc
    for (std::size_t p = 0; p < arcs.size(); ++p)
        if (t <= arcs[p].t_hi) return static_cast<int>(p);
    return static_cast<int>(arcs.size()) - 1;
}

ArcPartition partition_arcs(const EigenGrid& grid, const PartitionOptions& opts) {
    const auto& ts = grid.ts();
    const std::size_t n = ts.size();
    const int d = grid.degree();

    std::vector<std::vector<int>> sigs(n);
    for (std::size_t i = 0; i < n; ++i) sigs[i] = signature_at(grid, i, opts.tie_tol);
    despeckle(sigs);

    ArcPartition out;
    out.breakpoints.push_back(ts.front());
    std::vector<std::size_t> arc_start{0};
    for (std::size_t i = 1; i < n; ++i) {
        if (sigs[i] == sigs[i - 1]) continue;
        // refine the change point by bisection on "signature != left signature"
        double lo = ts[i - 1], hi = ts[i];
        const std::vector<int>& left_sig = sigs[i - 1];
        int guard = 0;
        while (hi - lo > opts.bisect_tol && guard++ < 80) {
            double mid = 0.5 * (lo + hi);
            std::vector<int> s;
            try {
                s = signature_at_t(grid, mid, opts.tie_tol);
            } catch (const std::exception&) {
                break; // singular point inside the bracket; split at it as-is
            }
            if (s == left_sig) lo = mid;
            else hi = mid;
        }
        out.breakpoints.push_back(0.5 * (lo + hi));
        arc_start.push_back(i);
    }
    out.breakpoints.push_back(ts.back());

    // build arcs
    for (std::size_t p = 0; p + 1 < out.breakpoints.size(); ++p) {
        Arc arc;
        arc.t_lo = out.breakpoints[p];
        arc.t_hi = out.breakpoints[p + 1];
        std::size_t i0 = arc_start[p];
        std::size_t i1 = (p + 1 < arc_start.size()) ? arc_start[p + 1] : n;
        std::size_t imid = i0 + (i1 - i0) / 2;

        std::vector<int> order(d);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return std::abs(grid.values()[x][imid]) > std::abs(grid.values()[y][imid]);
        });
        arc.order = order;

        // resonance: any pair tied throughout the arc's grid points
        std::vector<char> in_tie(d, 0);
        std::size_t pairi = 0;
        for (int a = 0; a < d; ++a) {
            for (int b = a + 1; b < d; ++b, ++pairi) {
                bool tied = i1 > i0;
                for (std::size_t i = i0; i < i1; ++i)
                    if (sigs[i][pairi] != 0) {
                        tied = false;
                        break;
                    }
                if (tied && (i1 - i0) >= 3) {
                    arc.resonance = true;
                    in_tie[a] = in_tie[b] = 1;
                }
            }
        }
        for (int m = 0; m < d; ++m)
            if (in_tie[m]) arc.tied.push_back(m);

        for (const auto& e : grid.events())
            if (e.kind == SpectralEvent::Kind::Singular && e.t > arc.t_lo && e.t < arc.t_hi)
                arc.singular_ts.push_back(e.t);
        out.arcs.push_back(std::move(arc));
    }
    return out;
}

std::string RegularityReport::summary() const {
    std::ostringstream os;
    os << (regular ? "regular" : "irregular");
    os << " (min root separation " << min_separation << " at t=" << min_separation_t
       << "; min |root| " << min_magnitude << " at t=" << min_magnitude_t << "; min |c_0| "
       << min_trailing << "; min |c_d| " << min_leading << "; " << events.size() << " events)";
    return os.str();
}

RegularityReport check_regularity(const EigenGrid& grid, const RegularityOptions& opts) {
    RegularityReport rep;
    const auto& ts = grid.ts();
    const int d = grid.degree();

    rep.min_separation = std::numeric_limits<double>::infinity();
    rep.min_magnitude = std::numeric_limits<double>::infinity();
    rep.min_trailing = std::numeric_limits<double>::infinity();
    rep.min_leading = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (int a = 0; a < d; ++a) {
            double mag = std::abs(grid.values()[a][i]);
            if (mag < rep.min_magnitude) {
                rep.min_magnitude = mag;
                rep.min_magnitude_t = ts[i];
            }
            for (int b = a + 1; b < d; ++b) {
                double sep = std::abs(grid.values()[a][i] - grid.values()[b][i]);
                if (sep < rep.min_separation) {
                    rep.min_separation = sep;
                    rep.min_separation_t = ts[i];
                }
            }
        }
        CoeffEval ce = grid.poly().eval_coeffs(ts[i]);
        double c0 = std::abs(ce.c.front()), cd = std::abs(ce.c.back());
        if (c0 < rep.min_trailing) {
            rep.min_trailing = c0;
            rep.min_trailing_t = ts[i];
        }
        if (cd < rep.min_leading) {
            rep.min_leading = cd;
            rep.min_leading_t = ts[i];
        }
    }
    // event-refined values override grid scans
    for (const auto& e : grid.events()) {
        if (e.kind == SpectralEvent::Kind::Collision && e.measure < rep.min_separation) {
            rep.min_separation = e.measure;
            rep.min_separation_t = e.t;
        }
        if (e.kind == SpectralEvent::Kind::Vanishing && e.measure < rep.min_magnitude) {
            rep.min_magnitude = e.measure;
            rep.min_magnitude_t = e.t;
        }
    }
    rep.events = grid.events();
    rep.regular = rep.events.empty() && rep.min_separation > opts.collision_tol &&
                  rep.min_magnitude > opts.vanishing_tol && rep.min_trailing > opts.vanishing_tol &&
                  rep.min_leading > opts.vanishing_tol;
    return rep;
}

} // namespace qwkb
