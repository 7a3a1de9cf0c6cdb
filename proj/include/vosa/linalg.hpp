#pragma once
// Exact linear algebra over cyclotomic fields: incremental spans of sparse
// state vectors and small dense matrices.

#include <optional>
#include <vector>

#include "vosa/cyclotomic.hpp"
#include "vosa/superfock.hpp"

namespace vosa {

using CycMatrix = std::vector<std::vector<Cyclotomic>>;

// Inverse of a square matrix; throws std::domain_error when singular.
CycMatrix inverse(const CycMatrix& m);
CycMatrix multiply(const CycMatrix& a, const CycMatrix& b);

// Span of inserted vectors with coordinates relative to the inserted ones.
class SpanBasis {
public:
    // Adds v if it is independent of the vectors seen so far; returns whether it was added.
    bool insert(const SuperVector& v);
    std::size_t size() const { return originals_.size(); }
    const std::vector<SuperVector>& vectors() const { return originals_; }
    // Coordinates of v relative to vectors(), or nullopt when v is outside the span.
    std::optional<std::vector<Cyclotomic>> coordinates(const SuperVector& v) const;
    bool contains(const SuperVector& v) const { return coordinates(v).has_value(); }

private:
    struct Row {
        Monomial pivot;
        SuperVector vec;                // pivot coefficient 1
        std::vector<Cyclotomic> combo;  // vec = sum combo[i] * originals_[i]
    };
    // Reduces v against all rows; combo receives the subtracted multiples.
    SuperVector reduce(SuperVector v, std::vector<Cyclotomic>& combo) const;
    std::vector<Row> rows_;
    std::vector<SuperVector> originals_;
};

}  // namespace vosa
