#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "derham/error.hpp"
#include "derham/rational.hpp"

namespace derham {

class SymRing;
using RingPtr = std::shared_ptr<const SymRing>;

struct SymbolDecl {
    std::string name;
    bool invertible = true;
};

// Exponent vector aligned with the ring's symbol declaration order.
using ExpVec = std::vector<int>;
// Raw (possibly unreduced) polynomial: exponent vector -> coefficient.
using TermMap = std::map<ExpVec, GaussianRational>;

// One oriented reduction: sym^power -> rhs.  The rhs is stored reduced and
// must have degree < power in sym.  `inv`, when derivable, rewrites sym^-1.
struct ConstraintRule {
    int sym = -1;
    int power = 0;
    TermMap rhs;
    std::optional<TermMap> inv;
    std::string text;
    // Roots of X^power - rhs over the rest of the ring, when the modulus
    // splits; used by the zero-divisor test.
    std::vector<TermMap> roots;
    // Quotient by this rule keeps the coefficient ring an integral domain.
    bool domain_like = false;
};

// Commutative coefficient ring: Laurent polynomials over Gaussian rationals
// in the declared symbols, reduced modulo the constraint rules.  Immutable
// after construction; shared by every Coefficient built over it.
class SymRing : public std::enable_shared_from_this<SymRing> {
  public:
    static RingPtr make(std::vector<SymbolDecl> symbols, std::vector<TermMap> constraints = {});

    std::size_t size() const { return symbols_.size(); }
    const std::vector<SymbolDecl>& symbols() const { return symbols_; }
    const std::string& name(int id) const { return symbols_[static_cast<std::size_t>(id)].name; }
    int id(const std::string& name) const; // -1 when absent
    int require_id(const std::string& name) const;

    const std::vector<ConstraintRule>& constraints() const { return rules_; }
    const ConstraintRule* rule_for(int sym) const;
    bool symbol_invertible(int sym) const;

    // Symbol ids sorted by name; used by canonical renderers.
    const std::vector<int>& name_order() const { return name_order_; }

    bool same_structure(const SymRing& o) const;

    // Reduce a raw term map to the canonical normal form.
    TermMap reduce(TermMap in) const;

  private:
    SymRing() = default;
    std::vector<SymbolDecl> symbols_;
    std::vector<ConstraintRule> rules_;
    std::vector<int> name_order_;
};

class Coefficient {
  public:
    Coefficient() = default;
    explicit Coefficient(RingPtr ring) : ring_(std::move(ring)) {}
    Coefficient(RingPtr ring, TermMap terms);

    static Coefficient zero(RingPtr ring) { return Coefficient(std::move(ring)); }
    static Coefficient one(RingPtr ring) { return from_number(std::move(ring), GaussianRational(1)); }
    static Coefficient from_number(RingPtr ring, GaussianRational v);
    static Coefficient from_int(RingPtr ring, long v) {
        return from_number(std::move(ring), GaussianRational(v));
    }
    static Coefficient symbol(RingPtr ring, const std::string& name, int exp = 1);
    static Coefficient monomial(RingPtr ring, GaussianRational c,
                                const std::map<std::string, int>& exps);

    const RingPtr& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    // Single term equal to a plain number.
    std::optional<GaussianRational> as_number() const;
    // Single term whose symbols are all invertible: a unit monomial.
    bool is_invertible_monomial() const;
    Coefficient inverse() const;

    // True when multiplying by this coefficient can be cancelled: nonzero and
    // known not to be a zero divisor in the constrained quotient ring.
    bool is_cancellable() const;

    Coefficient operator-() const;
    Coefficient operator+(const Coefficient& o) const;
    Coefficient operator-(const Coefficient& o) const;
    Coefficient operator*(const Coefficient& o) const;
    Coefficient& operator+=(const Coefficient& o) { return *this = *this + o; }
    Coefficient& operator-=(const Coefficient& o) { return *this = *this - o; }
    Coefficient& operator*=(const Coefficient& o) { return *this = *this * o; }
    Coefficient operator*(const GaussianRational& g) const;

    bool operator==(const Coefficient& o) const;
    bool operator!=(const Coefficient& o) const { return !(*this == o); }

    Coefficient pow(int e) const;

    // Replace `name` by `replacement` everywhere.  Negative exponents of
    // `name` require an invertible replacement.
    Coefficient substitute(const std::string& name, const Coefficient& replacement) const;

    // Exact numeric evaluation; every ring symbol must be assigned and the
    // assignment must satisfy every constraint.
    GaussianRational specialize(const std::map<std::string, GaussianRational>& assignment) const;

    // Rebuild this coefficient over another ring, matching symbols by name.
    Coefficient to_ring(const RingPtr& target) const;

    // Symbols occurring with nonzero exponent.
    std::vector<int> support() const;

    std::string to_string() const;

  private:
    void check_ring(const Coefficient& o) const;
    RingPtr ring_;
    TermMap terms_;
};

// [k]_Q = 1 + Q + ... + Q^{k-1}, reduced in Q's ring.
Coefficient q_integer(int k, const Coefficient& q_value);

// Exact division: returns c with c * d == t, when the algorithm finds one.
std::optional<Coefficient> try_divide_exact(const Coefficient& t, const Coefficient& d);

// Validates an assignment against the ring's constraints; throws config_error
// naming the first violated constraint.
void check_assignment(const RingPtr& ring, const std::map<std::string, GaussianRational>& assignment);

} // namespace derham
