#include "vosa/linalg.hpp"

#include <stdexcept>

namespace vosa {

CycMatrix inverse(const CycMatrix& m) {
    const std::size_t n = m.size();
    CycMatrix a = m;
    CycMatrix inv(n, std::vector<Cyclotomic>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw std::invalid_argument("inverse: matrix is not square");
        inv[i][i] = Cyclotomic(1);
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw std::domain_error("inverse: singular matrix");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Cyclotomic s = a[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= s;
            inv[col][j] *= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Cyclotomic f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

CycMatrix multiply(const CycMatrix& a, const CycMatrix& b) {
    if (a.empty()) return {};
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    CycMatrix c(n, std::vector<Cyclotomic>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    }
    return c;
}

SuperVector SpanBasis::reduce(SuperVector v, std::vector<Cyclotomic>& combo) const {
    combo.assign(originals_.size(), Cyclotomic());
    for (const auto& row : rows_) {
        Cyclotomic c = v.coeff(row.pivot);
        if (c.is_zero()) continue;
        v -= row.vec * c;
        for (std::size_t i = 0; i < row.combo.size(); ++i) {
            if (!row.combo[i].is_zero()) combo[i] += c * row.combo[i];
        }
    }
    return v;
}

bool SpanBasis::insert(const SuperVector& v) {
    std::vector<Cyclotomic> combo;
    SuperVector r = reduce(v, combo);
    if (r.is_zero()) return false;
    // r = v - sum combo[i] originals[i]
    Row row;
    row.pivot = r.terms().begin()->first;
    Cyclotomic s = r.terms().begin()->second.inverse();
    row.vec = r * s;
    row.combo.assign(originals_.size() + 1, Cyclotomic());
    for (std::size_t i = 0; i < combo.size(); ++i) row.combo[i] = -combo[i] * s;
    row.combo.back() = s;
    for (auto& old : rows_) old.combo.resize(originals_.size() + 1);
    originals_.push_back(v);
    rows_.push_back(std::move(row));
    return true;
}

std::optional<std::vector<Cyclotomic>> SpanBasis::coordinates(const SuperVector& v) const {
    std::vector<Cyclotomic> combo;
    SuperVector r = reduce(v, combo);
    if (!r.is_zero()) return std::nullopt;
    return combo;
}

}  // namespace vosa
