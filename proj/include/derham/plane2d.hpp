#pragma once

#include <array>

#include "derham/diffcalc.hpp"
#include "derham/tensorcheck.hpp"

namespace derham {

// The two-dimensional quantum-plane case study: the standard R-hat matrix,
// the C1/C2 calculus families, the admissible Q values, the second-order
// quantum planes they generate, and quantum-group covariance.

// Base ring in the deformation parameters q, r.
RingPtr case_ring();
// Calculus generators x, y, dx, dy, d2x, d2y.
AlphabetPtr case_alphabet();

// The 4x4 R-hat with diagonal (q, ., ., q) and middle block
// [[q - 1/q, 1], [1, 0]], in the pair basis (11, 12, 21, 22).
StructureMatrix standard_rhat(const RingPtr& ring);

// B = (1/q) R-hat.
StructureMatrix plane_b_matrix(const RingPtr& ring);

// The printed C1 or C2; construction verifies the linear condition against
// B = (1/q) R-hat and the braid compatibility against the equivalent plane
// representative B' = (1/r) C (the exact identity holds for the printed B
// only at the Wess-Zumino point r = q^2).
StructureMatrix c_matrix(int family, const RingPtr& ring);

// C scaled by the inverse of its diagonal entry: the plane structure matrix
// under which the braid compatibility with C is an exact identity.  The
// C1/C2 matrices are Hecke solutions with (C - rE)(C + E) = 0, so this is
// the Hecke construction's B = (1/mu) R with R = C, mu = r.
StructureMatrix plane_b_from_c(const StructureMatrix& C);

struct SwapDuality {
    bool holds = false;
    // Which substitution of r makes the swapped, q-inverted C1 equal C2.
    std::string r_substitution;
};

// Conjugates C1 by the index swap 1 <-> 2 and substitutes q -> 1/q, then
// compares with C2, trying r -> r and r -> 1/r.
SwapDuality swap_duality_check(const RingPtr& ring);

enum class QBranchLabel { cubic_root, inverse_sqrt_r_plus, inverse_sqrt_r_minus, imaginary_unit };

std::string branch_label_name(QBranchLabel label);
QBranchLabel branch_label_from(const std::string& name);

struct QBranch {
    QBranchLabel label;
    std::string constraint; // e.g. "Q^2 + Q + 1 = 0" or "s^2 = r, Q = 1/s"
    std::string note;
};

struct QBranchSolve {
    std::vector<QBranch> branches;
    // Scalar obtained by eliminating d2y d2x from the off-diagonal pair of
    // the second-order relations, over the ring (q, r, Q).
    Coefficient eliminated_scalar;
    // Its factorization; the product must expand back to the scalar.
    std::vector<Coefficient> evidence_factors;
    // The common diagonal condition 1 - Q^2 d.
    Coefficient diagonal_condition;
};

QBranchSolve solve_q_branches(const StructureMatrix& C);

// Ring and Q value realizing one branch over the base symbols q, r.
struct BranchContext {
    RingPtr ring;
    Coefficient Q;
    std::string description;
};

BranchContext branch_context(QBranchLabel label);

// Raised when the cubic-root branch is asked for second-order plane
// relations; in that branch the second-order differentials cannot satisfy
// any particular binary relations.
struct branch_refusal : error {
    explicit branch_refusal(const std::string& what) : error(what) {}
};

struct SecondOrderPlane {
    BranchContext context;
    std::vector<Element> instantiated; // the branch-specialized relations
    RelationSet relations;
};

SecondOrderPlane second_order_plane(const StructureMatrix& C, QBranchLabel branch);

enum class GlqKind { standard_q, rq_family1, rq_family2 };

struct GlqRelations {
    AlphabetPtr alphabet; // entries alpha, beta, gamma, delta (degree 0)
    RingPtr ring;
    std::vector<Element> raw;       // transcribed exactly as printed
    std::vector<Element> corrected; // with the documented typo fixes
    std::vector<std::string> notes; // what differs between raw and corrected
};

GlqRelations glq2_relations(GlqKind kind, const RingPtr& ring);

struct CovarianceItem {
    std::string relation;
    std::string residue;
    bool ok = false;
};

struct CovarianceReport {
    bool all_ok = true;
    std::vector<CovarianceItem> items;
};

// Substitutes g_i -> sum_j entries[i][j] (x) g_j into every plane relation,
// expands in the combined algebra (entries commute with plane generators),
// reduces to normal form and reports the residues.
CovarianceReport check_covariance(const RelationSet& plane, int plane_degree,
                                  const GlqRelations& coaction,
                                  bool use_corrected);

} // namespace derham
