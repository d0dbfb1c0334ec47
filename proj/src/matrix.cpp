#include "derham/matrix.hpp"

namespace derham {

CoeffMatrix CoeffMatrix::identity(RingPtr ring, std::size_t n) {
    CoeffMatrix out(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) out.at(i, i) = Coefficient::one(ring);
    return out;
}

CoeffMatrix CoeffMatrix::operator*(const CoeffMatrix& o) const {
    if (cols_ != o.rows_) throw structural_error("matrix dimension mismatch in product");
    CoeffMatrix out(ring_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Coefficient& a = at(i, k);
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                const Coefficient& b = o.at(k, j);
                if (b.is_zero()) continue;
                out.at(i, j) += a * b;
            }
        }
    return out;
}

CoeffMatrix CoeffMatrix::operator+(const CoeffMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw structural_error("matrix dimension mismatch in sum");
    CoeffMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
    return out;
}

CoeffMatrix CoeffMatrix::operator-(const CoeffMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw structural_error("matrix dimension mismatch in difference");
    CoeffMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
    return out;
}

CoeffMatrix CoeffMatrix::scaled(const Coefficient& c) const {
    CoeffMatrix out = *this;
    for (auto& x : out.data_) x *= c;
    return out;
}

bool CoeffMatrix::is_zero() const {
    for (const auto& x : data_)
        if (!x.is_zero()) return false;
    return true;
}

bool CoeffMatrix::operator==(const CoeffMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (data_[i] != o.data_[i]) return false;
    return true;
}

CoeffMatrix CoeffMatrix::to_ring(const RingPtr& target) const {
    CoeffMatrix out(target, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].to_ring(target);
    return out;
}

CoeffMatrix CoeffMatrix::substitute(const std::string& name, const Coefficient& repl) const {
    CoeffMatrix out(ring_, rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].substitute(name, repl);
    return out;
}

StructureMatrix StructureMatrix::identity(int n, RingPtr ring) {
    StructureMatrix out(n, ring);
    out.m = CoeffMatrix::identity(out.m.ring(), static_cast<std::size_t>(n) * n);
    return out;
}

StructureMatrix StructureMatrix::to_ring(const RingPtr& target) const {
    StructureMatrix out;
    out.n = n;
    out.m = m.to_ring(target);
    return out;
}

StructureMatrix StructureMatrix::substitute(const std::string& name,
                                            const Coefficient& repl) const {
    StructureMatrix out;
    out.n = n;
    out.m = m.substitute(name, repl);
    return out;
}

CoeffMatrix lift(const StructureMatrix& M, Slots slots) {
    const int n = M.n;
    const std::size_t dim = static_cast<std::size_t>(n) * n * n;
    CoeffMatrix out(M.m.ring(), dim, dim);
    auto idx3 = [n](int i, int j, int k) {
        return (static_cast<std::size_t>(i - 1) * n + static_cast<std::size_t>(j - 1)) * n +
               static_cast<std::size_t>(k - 1);
    };
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int a = 1; a <= n; ++a)
                    for (int b = 1; b <= n; ++b) {
                        if (slots == Slots::s12) {
                            const Coefficient& c = M.entry(i, j, a, b);
                            if (!c.is_zero()) out.at(idx3(i, j, k), idx3(a, b, k)) += c;
                        } else {
                            const Coefficient& c = M.entry(j, k, a, b);
                            if (!c.is_zero()) out.at(idx3(i, j, k), idx3(i, a, b)) += c;
                        }
                    }
    return out;
}

} // namespace derham
