#pragma once

#include <optional>

#include "derham/freealg.hpp"
#include "derham/matrix.hpp"

namespace derham {

// One de Rham complex instance: generators x^i, dx^i, d2x^i, the structure
// matrices that define its quadratic relations, and the deformation
// parameter Q of the Leibniz rule.
struct CalculusSpec {
    int n = 0;
    AlphabetPtr alphabet;
    RingPtr ring;
    StructureMatrix B;
    StructureMatrix C;
    std::optional<StructureMatrix> F;
    Coefficient Q;
    RelationSet relations;

    // Relation elements grouped by origin, kept for reporting and the
    // derivation-coherence tests.
    std::vector<Element> xx_relations;      // x x = B x x
    std::vector<Element> xdx_relations;     // x dx = C dx x
    std::vector<Element> xd2x_relations;    // x d2x = C d2x x + (QC - E) dx dx
    std::vector<Element> dxd2x_relations;   // ([2] E - Q^2 C) dx d2x = ([2] Q C - E) d2x dx
    std::vector<Element> d2xd2x_relations;  // d2x d2x = Q^2 C d2x d2x (or the F variants)
    std::vector<Element> xd2x_F_relations;  // x d2x = F d2x x
};

// The relation elements of equation groups, from the structure matrices.
std::vector<Element> x_x_relations(const AlphabetPtr& alphabet, const StructureMatrix& B);
std::vector<Element> x_dx_relations(const AlphabetPtr& alphabet, const StructureMatrix& C);
std::vector<Element> derive_x_d2x_relations(const AlphabetPtr& alphabet, const StructureMatrix& C,
                                            const Coefficient& Q);
std::vector<Element> derive_dx_d2x_relations(const AlphabetPtr& alphabet, const StructureMatrix& C,
                                             const Coefficient& Q);

struct D2xD2xRelations {
    // Always present, with the explicit [3]_Q prefactor.
    std::vector<Element> prefactored;
    // Present only when [3]_Q does not reduce to zero, i.e. Q is not
    // constrained to a primitive cubic root of unity.
    std::optional<std::vector<Element>> reduced;
};

D2xD2xRelations derive_d2x_d2x_relations(const AlphabetPtr& alphabet, const StructureMatrix& C,
                                         const Coefficient& Q);

struct FRelations {
    std::vector<Element> x_d2x;   // x d2x = F d2x x
    std::vector<Element> d2x_d2x; // d2x d2x = Q^4 F d2x d2x
};

FRelations derive_F_relations(const AlphabetPtr& alphabet, const StructureMatrix& F,
                              const Coefficient& Q);

// Assembles the full relation set (orientation with cofactor-style content
// cancellation) from the matrices.
CalculusSpec assemble_calculus(int n, const AlphabetPtr& alphabet, const StructureMatrix& B,
                               const StructureMatrix& C, std::optional<StructureMatrix> F,
                               const Coefficient& Q);

// The Q-Leibniz differential: d(x^i) = dx^i, d(dx^i) = d2x^i, d(d2x^i) = 0,
// d(w theta) = d(w) theta + Q^{deg w} w d(theta); the result is normalized
// against the spec's relation set.
Element apply_d(const Element& e, const CalculusSpec& spec);

// Variant without the final normalization (used by derivation tests that
// reduce against a restricted relation set).
Element apply_d_raw(const Element& e, const AlphabetPtr& alphabet, const Coefficient& Q);

struct ComplexCheckItem {
    std::string label;
    bool ok = false;
    std::string residue; // rendering of the nonzero residue on failure
};

struct ComplexReport {
    bool ok = true;
    std::vector<ComplexCheckItem> relation_checks; // d(relation) ~ 0
    std::vector<ComplexCheckItem> d3_checks;       // d^3(word) ~ 0
    std::vector<ComplexCheckItem> grade_checks;    // deg d(e) = deg e + 1
    std::string first_failure;
};

// Verifies that d descends to the quotient and that d^3 vanishes on all
// coordinate words up to max_len.
ComplexReport check_complex(const CalculusSpec& spec, int max_len = 4);

} // namespace derham
