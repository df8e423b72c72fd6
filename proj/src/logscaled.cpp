#include "qwkb/logscaled.hpp"

#include <algorithm>

namespace qwkb {

bool logscaled_solve(std::vector<LogScaled> A, std::vector<LogScaled> b, int d,
                     std::vector<LogScaled>& x) {
    auto at = [&](int i, int j) -> LogScaled& { return A[i * d + j]; };
    std::vector<int> perm(d);
    for (int i = 0; i < d; ++i) perm[i] = i;
    for (int k = 0; k < d; ++k) {
        int piv = k;
        double best = at(k, k).log_abs();
        for (int i = k + 1; i < d; ++i) {
            double m = at(i, k).log_abs();
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best == -std::numeric_limits<double>::infinity()) return false;
        if (piv != k) {
            for (int j = 0; j < d; ++j) std::swap(at(k, j), at(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (int i = k + 1; i < d; ++i) {
            if (at(i, k).is_zero()) continue;
            LogScaled f = at(i, k) / at(k, k);
            for (int j = k; j < d; ++j) at(i, j) = at(i, j) - f * at(k, j);
            b[i] = b[i] - f * b[k];
        }
    }
    x.assign(d, LogScaled::zero());
    for (int i = d - 1; i >= 0; --i) {
        LogScaled acc = b[i];
        for (int j = i + 1; j < d; ++j) acc = acc - at(i, j) * x[j];
        x[i] = acc / at(i, i);
    }
    return true;
}

LogScaled logscaled_det(std::vector<LogScaled> A, int d) {
    auto at = [&](int i, int j) -> LogScaled& { return A[i * d + j]; };
    LogScaled det = LogScaled::one();
    for (int k = 0; k < d; ++k) {
        int piv = k;
        double best = at(k, k).log_abs();
        for (int i = k + 1; i < d; ++i) {
            double m = at(i, k).log_abs();
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (best == -std::numeric_limits<double>::infinity()) return LogScaled::zero();
        if (piv != k) {
            for (int j = 0; j < d; ++j) std::swap(at(k, j), at(piv, j));
            det = -det;
        }
        det = det * at(k, k);
        for (int i = k + 1; i < d; ++i) {
            if (at(i, k).is_zero()) continue;
            LogScaled f = at(i, k) / at(k, k);
            for (int j = k; j < d; ++j) at(i, j) = at(i, j) - f * at(k, j);
        }
    }
    return det;
}

void svd_extremes(const std::vector<Complex>& A, int rows, int cols, double& smax,
                  double& smin) {
    // One-sided Jacobi on columns of a working copy.
    std::vector<Complex> W = A;
    auto col = [&](int j, int i) -> Complex& { return W[i * cols + j]; };
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                Complex apq(0.0, 0.0);
                double app = 0.0, aqq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    apq += std::conj(col(p, i)) * col(q, i);
                    app += std::norm(col(p, i));
                    aqq += std::norm(col(q, i));
                }
                off = std::max(off, std::abs(apq) / std::max(1e-300, std::sqrt(app * aqq)));
                if (std::abs(apq) < 1e-15 * std::sqrt(app * aqq)) continue;
                // complex Jacobi rotation
                double tau = (aqq - app) / (2.0 * std::abs(apq));
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double cs = 1.0 / std::sqrt(1.0 + t * t);
                double sn = cs * t;
                Complex ph = apq / std::abs(apq);
                for (int i = 0; i < rows; ++i) {
                    Complex vp = col(p, i), vq = col(q, i);
                    col(p, i) = cs * vp - sn * std::conj(ph) * vq;
                    col(q, i) = sn * ph * vp + cs * vq;
                }
            }
        }
        if (off < 1e-14) break;
    }
    smax = 0.0;
    smin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows; ++i) s += std::norm(col(j, i));
        s = std::sqrt(s);
        smax = std::max(smax, s);
        smin = std::min(smin, s);
    }
}

} // namespace qwkb
