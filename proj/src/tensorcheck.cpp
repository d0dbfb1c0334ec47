#include "derham/tensorcheck.hpp"

namespace derham {

namespace {

void require_same_n(const StructureMatrix& a, const StructureMatrix& b, const char* what) {
    if (a.n != b.n) throw structural_error(std::string("dimension mismatch in ") + what);
}

} // namespace

bool check_linear_condition(const StructureMatrix& B, const StructureMatrix& C) {
    require_same_n(B, C, "check_linear_condition");
    CoeffMatrix E = CoeffMatrix::identity(B.m.ring(), B.m.rows());
    return ((E - B.m) * (E + C.m)).is_zero();
}

bool check_braid_compat(const StructureMatrix& B, const StructureMatrix& C) {
    require_same_n(B, C, "check_braid_compat");
    CoeffMatrix B12 = lift(B, Slots::s12);
    CoeffMatrix B23 = lift(B, Slots::s23);
    CoeffMatrix C12 = lift(C, Slots::s12);
    CoeffMatrix C23 = lift(C, Slots::s23);
    return B12 * C23 * C12 == C23 * C12 * B23;
}

bool check_braid(const StructureMatrix& R) {
    CoeffMatrix R12 = lift(R, Slots::s12);
    CoeffMatrix R23 = lift(R, Slots::s23);
    return R12 * R23 * R12 == R23 * R12 * R23;
}

bool check_hecke(const StructureMatrix& R, const Coefficient& mu, const Coefficient& lambda) {
    CoeffMatrix E = CoeffMatrix::identity(R.m.ring(), R.m.rows());
    return ((R.m - E.scaled(mu)) * (R.m + E.scaled(lambda))).is_zero();
}

bool check_bff(const StructureMatrix& B, const StructureMatrix& F) {
    require_same_n(B, F, "check_bff");
    CoeffMatrix B12 = lift(B, Slots::s12);
    CoeffMatrix B23 = lift(B, Slots::s23);
    CoeffMatrix F12 = lift(F, Slots::s12);
    CoeffMatrix F23 = lift(F, Slots::s23);
    return B12 * F23 * F12 == F23 * F12 * B23;
}

FConsistency check_F_consistency(const StructureMatrix& C, const StructureMatrix& F,
                                 const Coefficient& Q) {
    require_same_n(C, F, "check_F_consistency");
    const RingPtr& ring = C.m.ring();
    CoeffMatrix E = CoeffMatrix::identity(ring, C.m.rows());
    Coefficient q2q = Q * Q + Q;
    Coefficient q3 = Q.pow(3);
    CoeffMatrix full_expr =
        E - C.m.scaled(q2q) + (E.scaled(q2q) - C.m.scaled(q3)) * F.m.scaled(Q);
    CoeffMatrix factored_expr = (E + C.m) * (E - F.m.scaled(Q));

    FConsistency out;
    out.full = full_expr.is_zero();
    out.factored = factored_expr.is_zero();
    // Detect the cubic-root constraint: Q^2 + Q + 1 reduces to zero.
    if ((Q * Q + Q + Coefficient::one(ring)).is_zero())
        out.cubic_identity = (full_expr == factored_expr);
    return out;
}

HeckeTriple build_from_hecke(const StructureMatrix& R, const Coefficient& mu,
                             const Coefficient& lambda, const Coefficient& Q) {
    std::vector<std::string> failures;
    if (!mu.is_invertible_monomial()) failures.push_back("mu is not a unit monomial");
    if (!lambda.is_invertible_monomial()) failures.push_back("lambda is not a unit monomial");
    if (failures.empty()) {
        if (!check_braid(R)) failures.push_back("R does not satisfy the braid relation");
        if (!check_hecke(R, mu, lambda))
            failures.push_back("(R - mu E)(R + lambda E) != 0");
    }
    if (!failures.empty()) throw precondition_error("build_from_hecke preconditions", failures);

    HeckeTriple t;
    t.B.n = R.n;
    t.B.m = R.m.scaled(mu.inverse());
    t.C.n = R.n;
    t.C.m = R.m.scaled(lambda.inverse());
    t.F.n = R.n;
    t.F.m = R.m.scaled((Q * Q) * mu.inverse());

    std::vector<std::string> post;
    if (!check_linear_condition(t.B, t.C)) post.push_back("(E - B)(E + C) != 0");
    if (!check_braid_compat(t.B, t.C)) post.push_back("B12 C23 C12 != C23 C12 B23");
    if (!check_bff(t.B, t.F)) post.push_back("B12 F23 F12 != F23 F12 B23");
    if (!check_F_consistency(t.C, t.F, Q).factored) post.push_back("(E + C)(E - Q F) != 0");
    if (!post.empty()) throw precondition_error("build_from_hecke postconditions", post);
    return t;
}

StructureMatrix build_F_from_B(const StructureMatrix& B, const StructureMatrix& C,
                               const Coefficient& Q) {
    require_same_n(B, C, "build_F_from_B");
    std::vector<std::string> failures;
    if (B.m * C.m != C.m * B.m) failures.push_back("B C != C B");
    StructureMatrix F;
    F.n = B.n;
    F.m = B.m.scaled(Q * Q);
    if (!check_bff(B, F)) failures.push_back("B12 F23 F12 != F23 F12 B23 for F = Q^2 B");
    if (!failures.empty()) throw precondition_error("build_F_from_B preconditions", failures);
    return F;
}

} // namespace derham
