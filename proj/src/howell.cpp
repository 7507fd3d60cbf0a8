#include <algorithm>
#include <cassert>
#include <numeric>

#include "kq/matrix.hpp"

// Howell normal form over Z/qZ by gcd-pivot elimination plus annihilator
// saturation, with the transform tracked through every row operation so
// that U * pad(A) = H with U invertible. The only operation that needs
// care is folding an annihilator multiple of a pivot row into the rows
// below it: the Bezout coefficient applied to the target row must be a
// unit mod q, which can always be arranged by shifting the coefficient
// within its residue class (see coprime_shift).

namespace kq {

namespace {

using i64 = std::int64_t;

// Largest divisor of n whose prime factors all divide s (the "s-part").
// s = 0 counts every prime, giving n itself.
i64 s_part(i64 s, i64 n) {
    i64 a = std::gcd(s, n);
    if (a == 0) return n;
    while (true) {
        const i64 g = std::gcd(a, n / a);
        if (g == 1) return a;
        a *= g;
    }
}

struct Workspace {
    i64 n;                            // modulus
    std::size_t cols;                 // columns of the input
    std::size_t size;                 // working rows = max(rows, cols)
    std::vector<std::vector<i64>> w;  // size x cols
    std::vector<std::vector<i64>> u;  // size x size
    std::vector<std::size_t> pivot_cols;  // strictly increasing, per pivot row

    i64 canon(i64 x) const {
        x %= n;
        return x < 0 ? x + n : x;
    }

    // dst += c * src (entrywise mod n); c canonical.
    static void axpy(std::vector<i64>& dst, i64 c, const std::vector<i64>& src,
                     i64 n) {
        if (c == 0) return;
        for (std::size_t i = 0; i < dst.size(); ++i)
            dst[i] = (dst[i] + c * src[i]) % n;
    }

    static void scale(std::vector<i64>& v, i64 c, i64 n) {
        for (auto& x : v) x = (c * x) % n;
    }

    void add_multiple(std::size_t dst, i64 c, std::size_t src) {
        axpy(w[dst], c, w[src], n);
        axpy(u[dst], c, u[src], n);
    }

    void scale_row(std::size_t r, i64 c) {
        scale(w[r], c, n);
        scale(u[r], c, n);
    }

    // (row_p, row_i) <- (s*row_p + t*row_i, (b/g)*row_p - (a/g)*row_i),
    // a 2x2 transform of determinant -1. Zeroes w[i][col], puts gcd at
    // w[p][col].
    void gcd_combine(std::size_t p, std::size_t i, std::size_t col) {
        const i64 a = w[p][col], b = w[i][col];
        if (b % a == 0) {
            add_multiple(i, canon(-(b / a)), p);
            return;
        }
        const ExtendedGcd e = extended_gcd(a, b);
        const i64 s = canon(e.s), t = canon(e.t);
        const i64 bg = canon(b / e.g), ag = canon(-(a / e.g));
        auto wp = w[p], up = u[p];
        scale(w[p], s, n);
        axpy(w[p], t, w[i], n);
        scale(u[p], s, n);
        axpy(u[p], t, u[i], n);
        auto wi = std::move(w[i]);
        auto ui = std::move(u[i]);
        scale(wi, ag, n);
        axpy(wi, bg, wp, n);
        scale(ui, ag, n);
        axpy(ui, bg, up, n);
        w[i] = std::move(wi);
        u[i] = std::move(ui);
    }

    // Plain echelon form with the pivot rows compacted at the top.
    void triangulate() {
        std::size_t r = 0;
        for (std::size_t j = 0; j < cols && r < size; ++j) {
            std::size_t p = r;
            while (p < size && w[p][j] == 0) ++p;
            if (p == size) continue;
            std::swap(w[r], w[p]);
            std::swap(u[r], u[p]);
            for (std::size_t i = r + 1; i < size; ++i)
                if (w[i][j] != 0) gcd_combine(r, i, j);
            pivot_cols.push_back(j);
            ++r;
        }
    }

    // s*a + t*b = g with s a unit mod n; a, b nonzero canonical.
    struct UnitBezout {
        i64 g, s, t;
    };
    UnitBezout unit_bezout(i64 a, i64 b) const {
        const ExtendedGcd e = extended_gcd(a, b);
        i64 s = canon(e.s), t = canon(e.t);
        if (std::gcd(s, n) != 1) {
            // s + k*(b/g) keeps the identity; k = n / s_part(s, n) dodges
            // every prime of n (they divide either s or the shift).
            const i64 k = n / s_part(s, n);
            s = (s + k * canon(b / e.g) % n) % n;
            t = canon(t - k % n * canon(a / e.g) % n);
        }
        assert(std::gcd(s, n) == 1);
        assert((s * canon(a) % n + t * canon(b) % n) % n == canon(e.g));
        return {e.g, s, t};
    }

    // Folds the annihilator multiple of pivot row k into the rows below.
    // Returns true on a structural change (pivot shrink or a new pivot
    // row), which invalidates the sweep in progress.
    bool saturate_one(std::size_t k) {
        const i64 p = w[k][pivot_cols[k]];
        const i64 ann = (n / std::gcd(p, n)) % n;
        if (ann == 0) return false;  // pivot is a unit

        std::vector<i64> va = w[k], vu = u[k];
        scale(va, ann, n);
        scale(vu, ann, n);

        bool structural = false;
        for (std::size_t j = pivot_cols[k] + 1; j < cols; ++j) {
            if (va[j] == 0) continue;
            const auto it =
                std::lower_bound(pivot_cols.begin(), pivot_cols.end(), j);
            const auto pos =
                static_cast<std::size_t>(it - pivot_cols.begin());
            if (it != pivot_cols.end() && *it == j) {
                const i64 pj = w[pos][j], b = va[j];
                if (b % pj == 0) {
                    const i64 c = canon(-(b / pj));
                    axpy(va, c, w[pos], n);
                    axpy(vu, c, u[pos], n);
                } else {
                    const UnitBezout ub = unit_bezout(pj, b);
                    const auto old_w = w[pos];
                    const auto old_u = u[pos];
                    scale_row(pos, ub.s);
                    axpy(w[pos], ub.t, va, n);
                    axpy(u[pos], ub.t, vu, n);
                    const i64 cv = canon(pj / ub.g), co = canon(-(b / ub.g));
                    scale(va, cv, n);
                    axpy(va, co, old_w, n);
                    scale(vu, cv, n);
                    axpy(vu, co, old_u, n);
                    structural = true;  // pivot shrank to gcd(pj, b)
                }
            } else {
                // New pivot column: materialise the remainder in the first
                // spare row, then rotate it into sorted position.
                const std::size_t r = pivot_cols.size();
                assert(r < size);
                axpy(w[r], 1, va, n);
                axpy(u[r], 1, vu, n);
                std::rotate(w.begin() + pos, w.begin() + r, w.begin() + r + 1);
                std::rotate(u.begin() + pos, u.begin() + r, u.begin() + r + 1);
                pivot_cols.insert(pivot_cols.begin() + pos, j);
                return true;
            }
        }
        for ([[maybe_unused]] auto x : va) assert(x == 0);
        return structural;
    }

    void saturate() {
        bool restart = true;
        while (restart) {
            restart = false;
            for (std::size_t k = 0; k < pivot_cols.size(); ++k)
                if (saturate_one(k)) {
                    restart = true;
                    break;
                }
        }
    }

    // Unit u with u*p = gcd(p, n) mod n.
    i64 canonical_pivot_unit(i64 p) const {
        const i64 d = std::gcd(p, n);
        const i64 nd = n / d;
        const ExtendedGcd e = extended_gcd((p / d) % nd, nd);
        i64 u0 = e.s % nd;
        if (u0 < 0) u0 += nd;
        if (std::gcd(u0, n) == 1) return u0;
        const i64 k = n / s_part(u0, n);
        const i64 lifted = (u0 + k % n * nd % n) % n;
        assert(std::gcd(lifted, n) == 1);
        return lifted;
    }

    // Pivots become divisors of n, entries above a pivot are reduced
    // modulo it.
    void normalize() {
        for (std::size_t k = 0; k < pivot_cols.size(); ++k) {
            const std::size_t col = pivot_cols[k];
            const i64 p = w[k][col];
            const i64 d = std::gcd(p, n);
            if (p != d) scale_row(k, canonical_pivot_unit(p));
            assert(w[k][col] == d);
            for (std::size_t i = 0; i < k; ++i) {
                const i64 c = w[i][col] / d;
                if (c) add_multiple(i, canon(-c), k);
            }
        }
    }
};

}  // namespace

HowellForm howell_form(const ModMatrix& a) {
    Workspace ws;
    ws.n = a.modulus().value();
    ws.cols = a.cols();
    ws.size = std::max(a.rows(), a.cols());
    ws.w.assign(ws.size, std::vector<i64>(ws.cols, 0));
    ws.u.assign(ws.size, std::vector<i64>(ws.size, 0));
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) ws.w[r][c] = a(r, c);
    for (std::size_t r = 0; r < ws.size; ++r) ws.u[r][r] = 1;

    ws.triangulate();
    ws.saturate();
    ws.normalize();

    std::vector<i64> hflat, uflat;
    hflat.reserve(ws.size * ws.cols);
    uflat.reserve(ws.size * ws.size);
    for (const auto& row : ws.w) hflat.insert(hflat.end(), row.begin(), row.end());
    for (const auto& row : ws.u) uflat.insert(uflat.end(), row.begin(), row.end());
    return {ModMatrix(ws.size, ws.cols, a.modulus(), hflat),
            ModMatrix(ws.size, ws.size, a.modulus(), uflat)};
}

ColumnSolver::ColumnSolver(const ModMatrix& a)
    : rows_(a.rows()), cols_(a.cols()), modulus_(a.modulus()),
      hf_(howell_form(transpose(a))) {
    for (std::size_t r = 0; r < hf_.h.rows(); ++r) {
        std::size_t c = 0;
        while (c < hf_.h.cols() && hf_.h(r, c) == 0) ++c;
        if (c == hf_.h.cols()) break;  // zero rows are at the bottom
        pivots_.emplace_back(r, c);
    }
}

// y with y * H = b^T, by greedy division at the pivots. Completeness rests
// on the Howell property of H.
std::optional<std::vector<std::int64_t>> ColumnSolver::reduce(
    const ModVector& b) const {
    const i64 q = modulus_.value();
    std::vector<i64> w(b.values());
    std::vector<i64> y(hf_.h.rows(), 0);
    for (const auto& [row, col] : pivots_) {
        if (w[col] == 0) continue;
        const i64 d = hf_.h(row, col);
        if (w[col] % d != 0) return std::nullopt;
        const i64 lambda = w[col] / d;
        y[row] = lambda;
        for (std::size_t c = col; c < w.size(); ++c)
            w[c] = ((w[c] - lambda * hf_.h(row, c)) % q + q) % q;
    }
    for (auto x : w)
        if (x != 0) return std::nullopt;
    return y;
}

std::optional<ModVector> ColumnSolver::solve(const ModVector& b) const {
    if (b.modulus() != modulus_)
        throw std::invalid_argument("solve: modulus mismatch");
    if (b.length() != rows_)
        throw std::invalid_argument("solve: right-hand side length mismatch");
    const auto y = reduce(b);
    if (!y) return std::nullopt;
    const i64 q = modulus_.value();
    // x = (y * U) restricted to the unpadded rows of transpose(a).
    std::vector<i64> x(cols_, 0);
    for (std::size_t j = 0; j < cols_; ++j) {
        i64 acc = 0;
        for (std::size_t i = 0; i < hf_.u.rows(); ++i)
            acc = (acc + (*y)[i] * hf_.u(i, j)) % q;
        x[j] = acc;
    }
    return ModVector(x, modulus_);
}

std::optional<ModMatrix> ColumnSolver::solve_columns(
    const ModMatrix& rhs) const {
    if (rhs.modulus() != modulus_)
        throw std::invalid_argument("solve: modulus mismatch");
    if (rhs.rows() != rows_)
        throw std::invalid_argument("solve: right-hand side shape mismatch");
    const i64 q = modulus_.value();
    std::vector<std::vector<i64>> ys;
    ys.reserve(rhs.cols());
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        auto y = reduce(rhs.column(c));
        if (!y) return std::nullopt;
        ys.push_back(std::move(*y));
    }
    ModMatrix out(cols_, rhs.cols(), modulus_);
    for (std::size_t c = 0; c < rhs.cols(); ++c)
        for (std::size_t j = 0; j < cols_; ++j) {
            i64 acc = 0;
            for (std::size_t i = 0; i < hf_.u.rows(); ++i)
                acc = (acc + ys[c][i] * hf_.u(i, j)) % q;
            out.set(j, c, acc);
        }
    return out;
}

}  // namespace kq
