#include "jumpflow/sparse.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jumpflow {

void CsrMatrix::dump_matrix_market(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw SolverError("cannot open " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << n << " " << n << " " << nnz() << "\n";
    char buf[64];
    for (int i = 0; i < n; ++i) {
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, col[p] + 1, val[p]);
            out << buf;
        }
    }
}

void spmv(const CsrMatrix& a, const double* x, double* y) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int i = 0; i < a.n; ++i) {
        double s = 0.0;
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) s += a.val[p] * x[a.col[p]];
        y[i] = s;
    }
}

std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != a.n) throw SolverError("spmv: dimension mismatch");
    std::vector<double> y(a.n);
    spmv(a, x.data(), y.data());
    return y;
}

void ilu0_refactor(const CsrMatrix& a, Ilu0Factors& f) {
    const int n = a.n;
    f.pattern = &a;
    f.val = a.val;
    f.diag_pos.assign(n, -1);
    std::vector<int> pos(n, -1); // scatter index of columns in the working row

    for (int i = 0; i < n; ++i) {
        const int rb = a.row_ptr[i], re = a.row_ptr[i + 1];
        for (int p = rb; p < re; ++p) pos[a.col[p]] = p;
        for (int p = rb; p < re; ++p) {
            const int k = a.col[p];
            if (k >= i) {
                if (k == i) f.diag_pos[i] = p;
                break;
            }
            const int dk = f.diag_pos[k];
            if (dk < 0 || f.val[dk] == 0.0)
                throw SolverError("ilu0: zero pivot at row " + std::to_string(k));
            const double mult = f.val[p] / f.val[dk];
            f.val[p] = mult;
            for (int q = dk + 1; q < a.row_ptr[k + 1]; ++q) {
                const int j = a.col[q];
                const int pj = pos[j];
                if (pj >= 0) f.val[pj] -= mult * f.val[q];
            }
        }
        if (f.diag_pos[i] < 0) {
            // diagonal may follow the lower entries; locate it
            for (int p = rb; p < re; ++p)
                if (a.col[p] == i) {
                    f.diag_pos[i] = p;
                    break;
                }
        }
        if (f.diag_pos[i] < 0) throw SolverError("ilu0: missing diagonal at row " + std::to_string(i));
        if (f.val[f.diag_pos[i]] == 0.0)
            throw SolverError("ilu0: zero pivot at row " + std::to_string(i));
        for (int p = rb; p < re; ++p) pos[a.col[p]] = -1;
    }
}

Ilu0Factors ilu0(const CsrMatrix& a) {
    Ilu0Factors f;
    ilu0_refactor(a, f);
    return f;
}

void Ilu0Factors::apply(const double* r, double* z) const {
    const CsrMatrix& a = *pattern;
    const int n = a.n;
    // forward solve L z = r (unit diagonal)
    for (int i = 0; i < n; ++i) {
        double s = r[i];
        for (int p = a.row_ptr[i]; p < diag_pos[i]; ++p) s -= val[p] * z[a.col[p]];
        z[i] = s;
    }
    // backward solve U z = z
    for (int i = n - 1; i >= 0; --i) {
        double s = z[i];
        for (int p = diag_pos[i] + 1; p < a.row_ptr[i + 1]; ++p) s -= val[p] * z[a.col[p]];
        z[i] = s / val[diag_pos[i]];
    }
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    const size_t n = a.size();
    for (size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

} // namespace

BiCgStabResult bicgstab(const CsrMatrix& a, const std::vector<double>& b,
                        const Ilu0Factors* m, double tol, int maxiter,
                        const std::vector<double>* x0) {
    const int n = a.n;
    if (static_cast<int>(b.size()) != n) throw SolverError("bicgstab: dimension mismatch");
    if (maxiter <= 0) maxiter = 10 * n;

    BiCgStabResult res;
    res.x.assign(n, 0.0);
    if (x0) res.x = *x0;

    std::vector<double> r(n), rhat(n), p(n), v(n), s(n), t(n), phat(n), shat(n);
    auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (m)
            m->apply(in.data(), out.data());
        else
            out = in;
    };

    spmv(a, res.x.data(), r.data());
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];

    const double bnorm = nrm2(b);
    const double target = tol * std::max(1.0, bnorm);
    double rnorm = nrm2(r);
    res.residual_history.push_back(rnorm);
    if (rnorm <= target) {
        res.converged = true;
        return res;
    }

    rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    p.assign(n, 0.0);
    v.assign(n, 0.0);
    bool breakdown_restart_used = false;
    int restarts = 0;

    auto true_residual = [&]() {
        spmv(a, res.x.data(), t.data());
        double s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = b[i] - t[i];
            r[i] = d;
            s2 += d * d;
        }
        return std::sqrt(s2);
    };
    auto restart = [&]() {
        const double tr = true_residual();
        rhat = r;
        rho = alpha = omega = 1.0;
        p.assign(n, 0.0);
        v.assign(n, 0.0);
        return tr;
    };

    for (int it = 0; it < maxiter; ++it) {
        res.iterations = it + 1;
        const double rho_new = dot(rhat, r);
        const double breakdown = 1e-300;
        if (std::abs(rho_new) < breakdown || std::abs(omega) < breakdown) {
            if (breakdown_restart_used)
                throw SolverError("bicgstab: breakdown (rho or omega vanished) after restart");
            breakdown_restart_used = true;
            rnorm = restart();
            if (rnorm <= target) {
                res.converged = true;
                break;
            }
            continue;
        }
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precond(p, phat);
        spmv(a, phat.data(), v.data());
        alpha = rho / dot(rhat, v);
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];

        if (nrm2(s) <= target) {
            for (int i = 0; i < n; ++i) res.x[i] += alpha * phat[i];
            rnorm = true_residual();
            res.residual_history.push_back(rnorm);
            if (rnorm <= target) {
                res.converged = true;
                break;
            }
            if (++restarts > 5) throw SolverError("bicgstab: stagnation near tolerance");
            rnorm = restart();
            continue;
        }

        precond(s, shat);
        spmv(a, shat.data(), t.data());
        const double tt = dot(t, t);
        omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
        for (int i = 0; i < n; ++i) {
            res.x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        rnorm = nrm2(r);
        res.residual_history.push_back(rnorm);
        if (rnorm <= target) {
            rnorm = true_residual();
            if (rnorm <= target) {
                res.converged = true;
                break;
            }
            if (++restarts > 5) throw SolverError("bicgstab: stagnation near tolerance");
            rnorm = restart();
        }
    }

    if (!res.converged) {
        const double tr = true_residual();
        if (tr <= target)
            res.converged = true;
        else
            throw SolverError("bicgstab: no convergence (residual " + std::to_string(tr) +
                              ", target " + std::to_string(target) + ")");
    }
    // report the independently recomputed true residual
    res.residual_history.push_back(true_residual());
    return res;
}

} // namespace jumpflow
