#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "derham/symring.hpp"

namespace derham {

struct GeneratorInfo {
    std::string name;
    int degree = 0; // 0: coordinate, 1: first-order differential, 2: second-order
    int index = 0;  // 1-based within its degree block
};

class Alphabet;
using AlphabetPtr = std::shared_ptr<const Alphabet>;

// Named generators with degrees in {0,1,2}, held in the canonical order used
// by the monomial order: degree-2 block first, then degree 1, then degree 0,
// index-ascending within each block.  A generator id is its position here.
class Alphabet {
  public:
    // Generators for an n-coordinate calculus: d2<name>, d<name>, <name>.
    static AlphabetPtr calculus(const std::vector<std::string>& coordinate_names);
    // Extends a calculus alphabet with degree-0 bialgebra entries placed
    // after the coordinates.
    static AlphabetPtr with_entries(const AlphabetPtr& base,
                                    const std::vector<std::string>& entry_names);
    static AlphabetPtr of(std::vector<GeneratorInfo> generators);

    std::size_t size() const { return gens_.size(); }
    const GeneratorInfo& gen(int id) const { return gens_[static_cast<std::size_t>(id)]; }
    int id_of(const std::string& name) const; // -1 when absent
    // Generator of the given degree and 1-based index; -1 when absent.
    int id_of(int degree, int index) const;
    int degree(int id) const { return gens_[static_cast<std::size_t>(id)].degree; }
    const std::string& name(int id) const { return gens_[static_cast<std::size_t>(id)].name; }

    bool same_structure(const Alphabet& o) const;

  private:
    std::vector<GeneratorInfo> gens_;
};

// A word in the free algebra: a sequence of generator ids.  The empty word
// is the algebra unit.
using Word = std::vector<int>;

int word_grade(const AlphabetPtr& alphabet, const Word& w);
std::string word_to_string(const AlphabetPtr& alphabet, const Word& w);

// Length-then-lexicographic order; generator ids are already ranked.
struct WordOrder {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// word u strictly smaller than v
bool word_less(const Word& u, const Word& v);

// Finite linear combination of words over a coefficient ring.
class Element {
  public:
    Element() = default;
    Element(AlphabetPtr alphabet, RingPtr ring)
        : alphabet_(std::move(alphabet)), ring_(std::move(ring)) {}

    static Element zero(AlphabetPtr alphabet, RingPtr ring) {
        return Element(std::move(alphabet), std::move(ring));
    }
    static Element unit(AlphabetPtr alphabet, RingPtr ring);
    static Element generator(const AlphabetPtr& alphabet, const RingPtr& ring,
                             const std::string& name);
    static Element from_word(AlphabetPtr alphabet, RingPtr ring, Word w,
                             Coefficient c);

    const AlphabetPtr& alphabet() const { return alphabet_; }
    const RingPtr& ring() const { return ring_; }
    const std::map<Word, Coefficient, WordOrder>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    void add_term(const Word& w, const Coefficient& c);

    Element operator-() const;
    Element operator+(const Element& o) const;
    Element operator-(const Element& o) const;
    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    // Free product: concatenation extended bilinearly, no reduction.
    Element operator*(const Element& o) const;
    Element scaled(const Coefficient& c) const;

    bool operator==(const Element& o) const;
    bool operator!=(const Element& o) const { return !(*this == o); }

    // Grade when every word has the same grade.
    std::optional<int> homogeneous_grade() const;

    // Largest word under the monomial order; nullopt for zero.
    std::optional<Word> leading_word() const;
    Coefficient coeff(const Word& w) const;

    std::string to_string() const;

  private:
    void check_compat(const Element& o) const;
    AlphabetPtr alphabet_;
    RingPtr ring_;
    std::map<Word, Coefficient, WordOrder> terms_;
};

// Oriented quadratic rewrite rule: a length-2 word rewriting to a strictly
// smaller element of equal grade.
struct RewriteRule {
    Word lhs; // length 2
    Element rhs;
};

class RelationSet {
  public:
    RelationSet() = default;
    RelationSet(AlphabetPtr alphabet, RingPtr ring)
        : alphabet_(std::move(alphabet)), ring_(std::move(ring)) {}

    const AlphabetPtr& alphabet() const { return alphabet_; }
    const RingPtr& ring() const { return ring_; }

    void add_rule(Word lhs, Element rhs);
    void add_residual(Element e);

    const std::map<Word, Element, WordOrder>& rules() const { return rules_; }
    const std::vector<Element>& residuals() const { return residuals_; }
    const Element* rule_for(int a, int b) const;

    // Every rule as the relation element lhs - rhs.
    std::vector<Element> rule_elements() const;

  private:
    AlphabetPtr alphabet_;
    RingPtr ring_;
    std::map<Word, Element, WordOrder> rules_;
    std::vector<Element> residuals_;
};

struct OrientOptions {
    // Also orient rows whose leading coefficient is a cancellable
    // non-zero-divisor that exactly divides every other coefficient.  This is
    // the cofactor-style solve used when assembling calculi from matrices.
    bool cancel_content = false;
};

// Gaussian elimination over the span of grade-homogeneous quadratic
// relations; pivots must carry invertible-monomial coefficients.  Rows whose
// leading coefficient cannot be normalized become residuals.
RelationSet orient_relations(const std::vector<Element>& relations,
                             const OrientOptions& options = {});

// Repeatedly replaces rule lhs factors until irreducible (leftmost-first).
Element normal_form(const Element& e, const RelationSet& rs);

// Same reduction with a randomized choice of redex at every step.
Element normal_form_random(const Element& e, const RelationSet& rs, std::mt19937& rng);

// Concatenation extended bilinearly followed by normal_form.
Element multiply(const Element& a, const Element& b, const RelationSet& rs);

struct CriticalPair {
    Word overlap; // length 3
    Element left_nf;
    Element right_nf;
    bool resolved = false;
};

// All overlap ambiguities between rule pairs, fully normalized both ways.
std::vector<CriticalPair> critical_pairs(const RelationSet& rs);

// True when e reduces to zero by the rules alone, or by rules followed by
// elimination against the residual span (residuals padded with words up to
// the length of e on both sides, unit-monomial or exact-division pivots).
bool reduces_to_zero(const Element& e, const RelationSet& rs);

// Rebuild an element over another alphabet/ring, matching generators by name
// and coefficients by symbol name.
Element transplant(const Element& e, const AlphabetPtr& alphabet, const RingPtr& ring);

} // namespace derham
