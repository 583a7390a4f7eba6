#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jumpflow {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Compressed sparse row matrix. Column indices strictly increasing per row.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;  // size n+1
    std::vector<int> col;
    std::vector<double> val;

    size_t nnz() const { return col.size(); }
    void dump_matrix_market(const std::string& path) const;
};

/// Incremental CSR builder; rows must be appended in order with sorted columns.
class CsrBuilder {
public:
    explicit CsrBuilder(int n, size_t nnz_hint = 0) : n_(n) {
        row_ptr_.reserve(n + 1);
        row_ptr_.push_back(0);
        if (nnz_hint) {
            col_.reserve(nnz_hint);
            val_.reserve(nnz_hint);
        }
    }
    void add(int column, double value) {
        col_.push_back(column);
        val_.push_back(value);
    }
    void close_row() { row_ptr_.push_back(static_cast<int>(col_.size())); }
    CsrMatrix take() {
        if (static_cast<int>(row_ptr_.size()) != n_ + 1)
            throw SolverError("CsrBuilder: row count mismatch");
        return CsrMatrix{n_, std::move(row_ptr_), std::move(col_), std::move(val_)};
    }

private:
    int n_;
    std::vector<int> row_ptr_, col_;
    std::vector<double> val_;
};

/// y = A x
void spmv(const CsrMatrix& a, const double* x, double* y);
std::vector<double> spmv(const CsrMatrix& a, const std::vector<double>& x);

/// ILU(0): combined L (unit diagonal, implicit) and U factors on A's pattern.
struct Ilu0Factors {
    const CsrMatrix* pattern = nullptr;
    std::vector<double> val;    // factored values, same layout as pattern->val
    std::vector<int> diag_pos;  // position of the diagonal entry per row

    /// z := (LU)^{-1} r
    void apply(const double* r, double* z) const;
};

Ilu0Factors ilu0(const CsrMatrix& a);
/// Refactor in place assuming identical pattern (values changed).
void ilu0_refactor(const CsrMatrix& a, Ilu0Factors& f);

struct BiCgStabResult {
    std::vector<double> x;
    std::vector<double> residual_history; // true-residual 2-norms, per half-step check
    int iterations = 0;
    bool converged = false;
};

/// Preconditioned BiCGStab. Stops when ||b - Ax||_2 <= tol * max(1, ||b||_2).
/// x0 (optional) seeds the iteration. On breakdown restarts once, then throws.
/// Throws SolverError carrying the best iterate message on non-convergence.
BiCgStabResult bicgstab(const CsrMatrix& a, const std::vector<double>& b,
                        const Ilu0Factors* m, double tol = 1e-13, int maxiter = 0,
                        const std::vector<double>* x0 = nullptr);

} // namespace jumpflow
