#include <doctest.h>

#include <random>

#include "derham/plane2d.hpp"

using namespace derham;

namespace {

Element plane_word(const SecondOrderPlane& p, std::initializer_list<const char*> names) {
    AlphabetPtr alphabet = case_alphabet();
    Word w;
    for (const char* n : names) w.push_back(alphabet->id_of(n));
    return Element::from_word(alphabet, p.context.ring, w, Coefficient::one(p.context.ring));
}

} // namespace

TEST_CASE("R-hat entries match the printed matrix") {
    auto ring = case_ring();
    StructureMatrix R = standard_rhat(ring);
    Coefficient q = Coefficient::symbol(ring, "q");
    CHECK(R.entry(1, 1, 1, 1) == q);
    CHECK(R.entry(1, 2, 1, 2) == q - q.inverse());
    CHECK(R.entry(2, 1, 2, 1).is_zero());
    CHECK(R.entry(1, 2, 2, 1) == Coefficient::one(ring));
    CHECK(R.entry(2, 2, 2, 2) == q);
}

TEST_CASE("C1 and C2 entries match the printed matrices") {
    auto ring = case_ring();
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient r = Coefficient::symbol(ring, "r");
    StructureMatrix C1 = c_matrix(1, ring);
    CHECK(C1.entry(1, 2, 2, 1) == q);
    CHECK(C1.entry(2, 1, 1, 2) == r * q.inverse());
    CHECK(C1.entry(1, 1, 1, 1) == r);
    StructureMatrix C2 = c_matrix(2, ring);
    CHECK(C2.entry(1, 2, 2, 1) == q * r);
    CHECK(C2.entry(2, 1, 1, 2) == q.inverse());
    CHECK(C2.entry(2, 1, 2, 1) == r - Coefficient::one(ring));
}

TEST_CASE("swap duality: C2 = swapped C1 with q -> 1/q") {
    auto ring = case_ring();
    SwapDuality sd = swap_duality_check(ring);
    CHECK(sd.holds);
    CHECK(sd.r_substitution == "r -> r");

    // numeric middle-block spot check at q = 2, r = 3
    StructureMatrix C1 = c_matrix(1, ring);
    StructureMatrix C2 = c_matrix(2, ring);
    std::map<std::string, GaussianRational> at1{{"q", GaussianRational(Rational(1, 2))},
                                                {"r", GaussianRational(3)}};
    std::map<std::string, GaussianRational> at2{{"q", GaussianRational(2)},
                                                {"r", GaussianRational(3)}};
    CHECK(C1.entry(1, 2, 2, 1).specialize(at1) == C2.entry(2, 1, 1, 2).specialize(at2));
    CHECK(C1.entry(2, 1, 1, 2).specialize(at1) == C2.entry(1, 2, 2, 1).specialize(at2));
}

TEST_CASE("Q branches for C1 and C2") {
    auto ring = case_ring();
    for (int family : {1, 2}) {
        QBranchSolve sol = solve_q_branches(c_matrix(family, ring));
        REQUIRE(sol.branches.size() == 4);
        CHECK(sol.branches[0].label == QBranchLabel::cubic_root);
        CHECK(sol.branches[1].label == QBranchLabel::inverse_sqrt_r_plus);
        CHECK(sol.branches[2].label == QBranchLabel::inverse_sqrt_r_minus);
        CHECK(sol.branches[3].label == QBranchLabel::imaginary_unit);

        // evidence: (1 + Q^2)(1 - Q^2 r) expands back to the eliminated scalar
        REQUIRE(sol.evidence_factors.size() == 2);
        Coefficient product = sol.evidence_factors[0] * sol.evidence_factors[1];
        CHECK(product == sol.eliminated_scalar);

        RingPtr rq = sol.eliminated_scalar.ring();
        Coefficient Q = Coefficient::symbol(rq, "Q");
        Coefficient r = Coefficient::symbol(rq, "r");
        Coefficient one = Coefficient::one(rq);
        Coefficient expect = (one + Q * Q) * (one - Q * Q * r);
        CHECK(sol.eliminated_scalar == expect);
        // 1 - Q^2(r-1) - Q^4 r, the eliminated scalar as displayed
        CHECK(expect == one - Q * Q * (r - one) - Q.pow(4) * r);
    }
}

TEST_CASE("Q branches for the identity control") {
    auto ring = case_ring();
    StructureMatrix E = StructureMatrix::identity(2, ring);
    QBranchSolve sol = solve_q_branches(E);
    // cubic root plus Q^2 = 1; no imaginary branch
    REQUIRE(sol.branches.size() == 3);
    CHECK(sol.branches[0].label == QBranchLabel::cubic_root);
    CHECK(sol.branches[1].label == QBranchLabel::inverse_sqrt_r_plus);
    CHECK(sol.branches[1].constraint == "s^2 = 1, Q = 1/s");
}

TEST_CASE("second-order plane at Q = +-1/sqrt(r): the q-plane without r") {
    auto ring = case_ring();
    for (int family : {1, 2}) {
        StructureMatrix C = c_matrix(family, ring);
        SecondOrderPlane plus = second_order_plane(C, QBranchLabel::inverse_sqrt_r_plus);
        SecondOrderPlane minus = second_order_plane(C, QBranchLabel::inverse_sqrt_r_minus);
        REQUIRE(plus.relations.rules().size() == 1);
        CHECK(plus.relations.residuals().empty());
        AlphabetPtr alphabet = case_alphabet();
        const Element* rhs =
            plus.relations.rule_for(alphabet->id_of("d2y"), alphabet->id_of("d2x"));
        REQUIRE(rhs);
        Coefficient qinv = Coefficient::symbol(plus.context.ring, "q").inverse();
        CHECK(*rhs == plane_word(plus, {"d2x", "d2y"}).scaled(qinv));
        // r absent from every rule coefficient
        for (const auto& [w, c] : rhs->terms())
            for (int sym : c.support()) CHECK(plus.context.ring->name(sym) != "r");
        // d2x d2y = q d2y d2x holds in the quotient
        Coefficient q = Coefficient::symbol(plus.context.ring, "q");
        Element rel = plane_word(plus, {"d2x", "d2y"}) -
                      plane_word(plus, {"d2y", "d2x"}).scaled(q);
        CHECK(normal_form(rel, plus.relations).is_zero());
        // both signs produce the identical relation set
        REQUIRE(minus.relations.rules().size() == 1);
        const Element* rhs_minus =
            minus.relations.rule_for(alphabet->id_of("d2y"), alphabet->id_of("d2x"));
        REQUIRE(rhs_minus);
        CHECK(rhs_minus->to_string() == rhs->to_string());
    }
}

TEST_CASE("second-order plane at Q = i for C1") {
    auto ring = case_ring();
    SecondOrderPlane p = second_order_plane(c_matrix(1, ring), QBranchLabel::imaginary_unit);
    AlphabetPtr alphabet = case_alphabet();
    CHECK(p.relations.rules().size() == 3);
    CHECK(p.relations.residuals().empty());
    CHECK(normal_form(plane_word(p, {"d2x", "d2x"}), p.relations).is_zero());
    CHECK(normal_form(plane_word(p, {"d2y", "d2y"}), p.relations).is_zero());
    Coefficient q = Coefficient::symbol(p.context.ring, "q");
    Coefficient r = Coefficient::symbol(p.context.ring, "r");
    // d2x d2y = -(q/r) d2y d2x
    Element rel = plane_word(p, {"d2x", "d2y"}) +
                  plane_word(p, {"d2y", "d2x"}).scaled(q * r.inverse());
    CHECK(normal_form(rel, p.relations).is_zero());
    const Element* rhs = p.relations.rule_for(alphabet->id_of("d2y"), alphabet->id_of("d2x"));
    REQUIRE(rhs);
    CHECK(*rhs == plane_word(p, {"d2x", "d2y"}).scaled(-(r * q.inverse())));
}

TEST_CASE("second-order plane at Q = i for C2") {
    auto ring = case_ring();
    SecondOrderPlane p = second_order_plane(c_matrix(2, ring), QBranchLabel::imaginary_unit);
    CHECK(normal_form(plane_word(p, {"d2x", "d2x"}), p.relations).is_zero());
    CHECK(normal_form(plane_word(p, {"d2y", "d2y"}), p.relations).is_zero());
    Coefficient q = Coefficient::symbol(p.context.ring, "q");
    Coefficient r = Coefficient::symbol(p.context.ring, "r");
    // d2x d2y = -(qr) d2y d2x
    Element rel = plane_word(p, {"d2x", "d2y"}) +
                  plane_word(p, {"d2y", "d2x"}).scaled(q * r);
    CHECK(normal_form(rel, p.relations).is_zero());
}

TEST_CASE("cubic root branch is refused") {
    auto ring = case_ring();
    CHECK_THROWS_AS(second_order_plane(c_matrix(1, ring), QBranchLabel::cubic_root),
                    branch_refusal);
}

TEST_CASE("GL_q(2) relation transcriptions") {
    auto ring = case_ring();
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient r = Coefficient::symbol(ring, "r");
    GlqRelations std_q = glq2_relations(GlqKind::standard_q, ring);
    // alpha beta - q beta alpha
    Element ab(std_q.alphabet, ring);
    ab.add_term(Word{std_q.alphabet->id_of("alpha"), std_q.alphabet->id_of("beta")},
                Coefficient::one(ring));
    ab.add_term(Word{std_q.alphabet->id_of("beta"), std_q.alphabet->id_of("alpha")}, -q);
    CHECK(std_q.raw[0] == ab);
    // alpha delta - delta alpha - (q - 1/q) beta gamma
    Element ad(std_q.alphabet, ring);
    ad.add_term(Word{std_q.alphabet->id_of("alpha"), std_q.alphabet->id_of("delta")},
                Coefficient::one(ring));
    ad.add_term(Word{std_q.alphabet->id_of("delta"), std_q.alphabet->id_of("alpha")},
                -Coefficient::one(ring));
    ad.add_term(Word{std_q.alphabet->id_of("beta"), std_q.alphabet->id_of("gamma")},
                -(q - q.inverse()));
    CHECK(std_q.raw[5] == ad);
    CHECK(std_q.raw[3] != std_q.corrected[3]); // the gamma-delta typo fix

    GlqRelations rq2 = glq2_relations(GlqKind::rq_family2, ring);
    Element ab2(rq2.alphabet, ring);
    ab2.add_term(Word{rq2.alphabet->id_of("alpha"), rq2.alphabet->id_of("beta")},
                 Coefficient::one(ring));
    ab2.add_term(Word{rq2.alphabet->id_of("beta"), rq2.alphabet->id_of("alpha")},
                 -(r * q).inverse());
    CHECK(rq2.raw[0] == ab2);
}

TEST_CASE("covariance of the coordinate q-plane under GL_q(2)") {
    auto ring = case_ring();
    StructureMatrix B = plane_b_matrix(ring);
    RelationSet plane = orient_relations(x_x_relations(case_alphabet(), B));
    GlqRelations coaction = glq2_relations(GlqKind::standard_q, ring);
    CovarianceReport corrected = check_covariance(plane, 0, coaction, true);
    CHECK(corrected.all_ok);
    // the printed gamma-delta typo does not enter this computation
    CovarianceReport raw = check_covariance(plane, 0, coaction, false);
    CHECK(raw.all_ok);
}

TEST_CASE("covariance fails under a corrupted bialgebra") {
    auto ring = case_ring();
    StructureMatrix B = plane_b_matrix(ring);
    RelationSet plane = orient_relations(x_x_relations(case_alphabet(), B));
    GlqRelations coaction = glq2_relations(GlqKind::standard_q, ring);
    // replace alpha gamma = q gamma alpha by alpha gamma = gamma alpha
    Element ag(coaction.alphabet, ring);
    ag.add_term(Word{coaction.alphabet->id_of("alpha"), coaction.alphabet->id_of("gamma")},
                Coefficient::one(ring));
    ag.add_term(Word{coaction.alphabet->id_of("gamma"), coaction.alphabet->id_of("alpha")},
                -Coefficient::one(ring));
    coaction.corrected[1] = ag;
    CovarianceReport report = check_covariance(plane, 0, coaction, true);
    CHECK(!report.all_ok);
    bool found = false;
    for (const auto& item : report.items)
        if (!item.ok && item.residue.find("x") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("covariance of the +-1/sqrt(r) second-order plane under GL_q(2)") {
    auto ring = case_ring();
    SecondOrderPlane p = second_order_plane(c_matrix(1, ring), QBranchLabel::inverse_sqrt_r_plus);
    GlqRelations coaction = glq2_relations(GlqKind::standard_q, p.context.ring);
    CHECK(check_covariance(p.relations, 2, coaction, true).all_ok);
}

TEST_CASE("covariance of the Q = i planes under the corrected GL_{r,q}(2) sets") {
    auto ring = case_ring();
    SecondOrderPlane p1 = second_order_plane(c_matrix(1, ring), QBranchLabel::imaginary_unit);
    GlqRelations c1 = glq2_relations(GlqKind::rq_family1, p1.context.ring);
    CHECK(check_covariance(p1.relations, 2, c1, true).all_ok);
    CHECK(!check_covariance(p1.relations, 2, c1, false).all_ok);

    SecondOrderPlane p2 = second_order_plane(c_matrix(2, ring), QBranchLabel::imaginary_unit);
    GlqRelations c2 = glq2_relations(GlqKind::rq_family2, p2.context.ring);
    CHECK(check_covariance(p2.relations, 2, c2, true).all_ok);
    CHECK(!check_covariance(p2.relations, 2, c2, false).all_ok);
}

TEST_CASE("full tower at Q = 1/sqrt(r): confluence and d^3 = 0") {
    BranchContext ctx = branch_context(QBranchLabel::inverse_sqrt_r_plus);
    AlphabetPtr alphabet = case_alphabet();
    StructureMatrix B = plane_b_matrix(case_ring()).to_ring(ctx.ring);
    StructureMatrix C1 = c_matrix(1, case_ring()).to_ring(ctx.ring);
    CalculusSpec spec = assemble_calculus(2, alphabet, B, C1, std::nullopt, ctx.Q);
    auto pairs = critical_pairs(spec.relations);
    CHECK(!pairs.empty());
    for (const auto& cp : pairs) {
        if (!cp.resolved)
            MESSAGE("unresolved overlap ", word_to_string(alphabet, cp.overlap), ": ",
                    cp.left_nf.to_string(), " vs ", cp.right_nf.to_string());
        CHECK(cp.resolved);
    }
    CHECK(check_complex(spec, 4).ok);
}

TEST_CASE("full tower at Q = i, numeric specialization: d^3 = 0") {
    // With Q = i the dx-d2x block is rational in r, so the symbolic tower
    // keeps residuals; at an exact numeric point everything orients.
    auto num_ring = SymRing::make({});
    AlphabetPtr alphabet = case_alphabet();
    std::map<std::string, GaussianRational> at{{"q", GaussianRational(2)},
                                               {"r", GaussianRational(3)},
                                               {"Q", GaussianRational::i()}};
    auto specialize_matrix = [&](const StructureMatrix& M) {
        StructureMatrix out(M.n, num_ring);
        for (std::size_t i = 0; i < M.m.rows(); ++i)
            for (std::size_t j = 0; j < M.m.cols(); ++j)
                out.m.at(i, j) = Coefficient::from_number(num_ring, M.m.at(i, j).specialize(at));
        return out;
    };
    BranchContext ctx = branch_context(QBranchLabel::imaginary_unit);
    StructureMatrix B = specialize_matrix(plane_b_matrix(case_ring()).to_ring(ctx.ring));
    StructureMatrix C1 = specialize_matrix(c_matrix(1, case_ring()).to_ring(ctx.ring));
    Coefficient Qi = Coefficient::from_number(num_ring, GaussianRational::i());
    CalculusSpec spec = assemble_calculus(2, alphabet, B, C1, std::nullopt, Qi);
    CHECK(spec.relations.residuals().empty());
    for (const auto& cp : critical_pairs(spec.relations)) CHECK(cp.resolved);
    ComplexReport report = check_complex(spec, 4);
    if (!report.ok) MESSAGE(report.first_failure);
    CHECK(report.ok);
}

TEST_CASE("corrupted C1 entry breaks confluence") {
    BranchContext ctx = branch_context(QBranchLabel::inverse_sqrt_r_plus);
    AlphabetPtr alphabet = case_alphabet();
    StructureMatrix B = plane_b_matrix(case_ring()).to_ring(ctx.ring);
    StructureMatrix C1 = c_matrix(1, case_ring()).to_ring(ctx.ring);
    C1.entry(1, 2, 2, 1) =
        Coefficient::symbol(ctx.ring, "q") + Coefficient::one(ctx.ring);
    CalculusSpec spec = assemble_calculus(2, alphabet, B, C1, std::nullopt, ctx.Q);
    bool any_unresolved = false;
    for (const auto& cp : critical_pairs(spec.relations))
        if (!cp.resolved) any_unresolved = true;
    CHECK(any_unresolved);
}
