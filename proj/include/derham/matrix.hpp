#pragma once

#include <vector>

#include "derham/symring.hpp"

namespace derham {

// Dense matrix of coefficients; small sizes only (up to n^3 x n^3 with n=2).
class CoeffMatrix {
  public:
    CoeffMatrix() = default;
    CoeffMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
        : ring_(std::move(ring)), rows_(rows), cols_(cols),
          data_(rows * cols, Coefficient::zero(ring_)) {}

    static CoeffMatrix identity(RingPtr ring, std::size_t n);

    const RingPtr& ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Coefficient& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Coefficient& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    CoeffMatrix operator*(const CoeffMatrix& o) const;
    CoeffMatrix operator+(const CoeffMatrix& o) const;
    CoeffMatrix operator-(const CoeffMatrix& o) const;
    CoeffMatrix scaled(const Coefficient& c) const;
    bool is_zero() const;
    bool operator==(const CoeffMatrix& o) const;
    bool operator!=(const CoeffMatrix& o) const { return !(*this == o); }

    CoeffMatrix to_ring(const RingPtr& target) const;
    CoeffMatrix substitute(const std::string& name, const Coefficient& replacement) const;

  private:
    RingPtr ring_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Coefficient> data_;
};

// n^2 x n^2 matrix indexed by generator pairs (i,j),(k,l), i.e. the paper's
// B, C, F, R.  Basis order (1,1),(1,2),...,(n,n); pair (i,j) flattens to
// (i-1)*n + (j-1).
struct StructureMatrix {
    int n = 0;
    CoeffMatrix m;

    StructureMatrix() = default;
    StructureMatrix(int n, RingPtr ring)
        : n(n), m(std::move(ring), static_cast<std::size_t>(n) * n,
                  static_cast<std::size_t>(n) * n) {}

    static StructureMatrix identity(int n, RingPtr ring);

    std::size_t pair_index(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * static_cast<std::size_t>(n) +
               static_cast<std::size_t>(j - 1);
    }
    // Entry with 1-based generator indices: row (i,j), column (k,l).
    Coefficient& entry(int i, int j, int k, int l) { return m.at(pair_index(i, j), pair_index(k, l)); }
    const Coefficient& entry(int i, int j, int k, int l) const {
        return m.at(pair_index(i, j), pair_index(k, l));
    }

    StructureMatrix to_ring(const RingPtr& target) const;
    StructureMatrix substitute(const std::string& name, const Coefficient& replacement) const;
};

enum class Slots { s12, s23 };

// Lift of an n^2 x n^2 operator to the triple tensor product, acting on the
// named slot pair and as the identity on the remaining slot.  Basis of
// V (x) V (x) V ordered lexicographically by (i,j,k).
CoeffMatrix lift(const StructureMatrix& M, Slots slots);

} // namespace derham
