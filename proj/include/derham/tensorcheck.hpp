#pragma once

#include "derham/matrix.hpp"

namespace derham {

// Matrix-level consistency battery for a calculus (B, C, optional F) and for
// Hecke R-matrices.  Every check is symbol-exact.

// (E - B)(E + C) = 0 on the n^2-dimensional pair space.
bool check_linear_condition(const StructureMatrix& B, const StructureMatrix& C);

// B12 C23 C12 = C23 C12 B23 on the triple tensor product.
bool check_braid_compat(const StructureMatrix& B, const StructureMatrix& C);

// R12 R23 R12 = R23 R12 R23.
bool check_braid(const StructureMatrix& R);

// (R - mu E)(R + lambda E) = 0.
bool check_hecke(const StructureMatrix& R, const Coefficient& mu, const Coefficient& lambda);

// B12 F23 F12 = F23 F12 B23.
bool check_bff(const StructureMatrix& B, const StructureMatrix& F);

struct FConsistency {
    bool full = false;     // E - (Q^2+Q) C + ((Q^2+Q) E - Q^3 C) Q F = 0 as printed
    bool factored = false; // (E + C)(E - Q F) = 0
    // With Q constrained by Q^2 + Q + 1 = 0, the full expression must reduce
    // to exactly (E + C)(E - Q F); absent when Q carries no such constraint.
    std::optional<bool> cubic_identity;
};

FConsistency check_F_consistency(const StructureMatrix& C, const StructureMatrix& F,
                                 const Coefficient& Q);

struct HeckeTriple {
    StructureMatrix B, C, F;
};

// B = (1/mu) R, C = (1/lambda) R, F = (Q^2/mu) R.  Preconditions (unit mu and
// lambda, braid, Hecke) and postconditions (linear condition, braid
// compatibility, B-F-F braid, factored F-condition) are all verified; every
// failed identity is reported.
HeckeTriple build_from_hecke(const StructureMatrix& R, const Coefficient& mu,
                             const Coefficient& lambda, const Coefficient& Q);

// F = Q^2 B, after verifying that B and C commute and that B12 F23 F12 =
// F23 F12 B23 holds.
StructureMatrix build_F_from_B(const StructureMatrix& B, const StructureMatrix& C,
                               const Coefficient& Q);

} // namespace derham
