#include "derham/plane2d.hpp"

namespace derham {

RingPtr case_ring() { return SymRing::make({{"q", true}, {"r", true}}); }

AlphabetPtr case_alphabet() { return Alphabet::calculus({"x", "y"}); }

StructureMatrix standard_rhat(const RingPtr& ring) {
    StructureMatrix R(2, ring);
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient one = Coefficient::one(ring);
    R.entry(1, 1, 1, 1) = q;
    R.entry(1, 2, 1, 2) = q - q.inverse();
    R.entry(1, 2, 2, 1) = one;
    R.entry(2, 1, 1, 2) = one;
    R.entry(2, 2, 2, 2) = q;
    return R;
}

StructureMatrix plane_b_matrix(const RingPtr& ring) {
    StructureMatrix R = standard_rhat(ring);
    StructureMatrix B;
    B.n = R.n;
    B.m = R.m.scaled(Coefficient::symbol(ring, "q").inverse());
    return B;
}

StructureMatrix c_matrix(int family, const RingPtr& ring) {
    if (family != 1 && family != 2) throw structural_error("c_matrix family must be 1 or 2");
    StructureMatrix C(2, ring);
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient r = Coefficient::symbol(ring, "r");
    Coefficient one = Coefficient::one(ring);
    C.entry(1, 1, 1, 1) = r;
    C.entry(2, 2, 2, 2) = r;
    if (family == 1) {
        C.entry(1, 2, 1, 2) = r - one;
        C.entry(1, 2, 2, 1) = q;
        C.entry(2, 1, 1, 2) = r * q.inverse();
    } else {
        C.entry(1, 2, 2, 1) = q * r;
        C.entry(2, 1, 1, 2) = q.inverse();
        C.entry(2, 1, 2, 1) = r - one;
    }
    StructureMatrix B = plane_b_matrix(ring);
    StructureMatrix Bc = plane_b_from_c(C);
    std::vector<std::string> failures;
    if (!check_linear_condition(B, C)) failures.push_back("(E - B)(E + C) != 0");
    if (!check_braid_compat(Bc, C))
        failures.push_back("B'12 C23 C12 != C23 C12 B'23 for B' = (1/r) C");
    // (1/r) C presents the same plane as (1/q) R-hat.
    RelationSet from_rhat = orient_relations(x_x_relations(case_alphabet(), B));
    RelationSet from_c = orient_relations(x_x_relations(case_alphabet(), Bc));
    bool same_plane = from_rhat.rules().size() == from_c.rules().size() &&
                      from_rhat.residuals().empty() && from_c.residuals().empty();
    if (same_plane)
        for (const auto& [lhs, rhs] : from_rhat.rules()) {
            auto it = from_c.rules().find(lhs);
            if (it == from_c.rules().end() || it->second != rhs) same_plane = false;
        }
    if (!same_plane) failures.push_back("(1/r) C does not present the quantum plane of R-hat");
    if (!failures.empty())
        throw precondition_error("c_matrix consistency with the plane matrix", failures);
    return C;
}

StructureMatrix plane_b_from_c(const StructureMatrix& C) {
    Coefficient mu = C.entry(1, 1, 1, 1);
    if (!mu.is_invertible_monomial())
        throw structural_error("plane_b_from_c needs a unit-monomial diagonal entry");
    StructureMatrix B;
    B.n = C.n;
    B.m = C.m.scaled(mu.inverse());
    return B;
}

SwapDuality swap_duality_check(const RingPtr& ring) {
    StructureMatrix C1 = c_matrix(1, ring);
    StructureMatrix C2 = c_matrix(2, ring);
    // Conjugate by the index swap 1 <-> 2 on both pair indices.
    StructureMatrix swapped(2, ring);
    auto flip = [](int i) { return i == 1 ? 2 : 1; };
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l)
                    swapped.entry(i, j, k, l) = C1.entry(flip(i), flip(j), flip(k), flip(l));
    Coefficient qinv = Coefficient::symbol(ring, "q").inverse();
    StructureMatrix swapped_q = swapped.substitute("q", qinv);

    SwapDuality out;
    if (swapped_q.m == C2.m) {
        out.holds = true;
        out.r_substitution = "r -> r";
        return out;
    }
    Coefficient rinv = Coefficient::symbol(ring, "r").inverse();
    if (swapped_q.substitute("r", rinv).m == C2.m) {
        out.holds = true;
        out.r_substitution = "r -> r^-1";
        return out;
    }
    return out;
}

std::string branch_label_name(QBranchLabel label) {
    switch (label) {
        case QBranchLabel::cubic_root: return "cubic_root";
        case QBranchLabel::inverse_sqrt_r_plus: return "inverse_sqrt_r_plus";
        case QBranchLabel::inverse_sqrt_r_minus: return "inverse_sqrt_r_minus";
        case QBranchLabel::imaginary_unit: return "imaginary_unit";
    }
    return "?";
}

QBranchLabel branch_label_from(const std::string& name) {
    if (name == "cubic_root") return QBranchLabel::cubic_root;
    if (name == "inverse_sqrt_r_plus") return QBranchLabel::inverse_sqrt_r_plus;
    if (name == "inverse_sqrt_r_minus") return QBranchLabel::inverse_sqrt_r_minus;
    if (name == "imaginary_unit") return QBranchLabel::imaginary_unit;
    throw config_error("unknown Q branch label: " + name);
}

QBranchSolve solve_q_branches(const StructureMatrix& C) {
    if (C.n != 2) throw structural_error("solve_q_branches expects a 2-dimensional C");
    RingPtr rq = SymRing::make({{"q", true}, {"r", true}, {"Q", true}});
    StructureMatrix Cl = C.to_ring(rq);
    Coefficient Q = Coefficient::symbol(rq, "Q");
    Coefficient Q2 = Q * Q;
    Coefficient one = Coefficient::one(rq);

    // Diagonal components only couple to themselves for the supported
    // families; their condition is (1 - Q^2 d) (d2x^i)^2 = 0.
    for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l)
                if (!(k == i && l == i) && !Cl.entry(i, i, k, l).is_zero())
                    throw structural_error("solve_q_branches: unsupported diagonal coupling");
    Coefficient d11 = Cl.entry(1, 1, 1, 1);
    if (d11 != Cl.entry(2, 2, 2, 2))
        throw structural_error("solve_q_branches: unequal diagonal entries");
    Coefficient diag_cond = one - Q2 * d11;

    // Off-diagonal 2x2 block in the words (d2x d2y, d2y d2x); eliminating
    // the second one leaves det(M) * d2x d2y = 0.
    for (int a = 0; a < 2; ++a) {
        int i = a == 0 ? 1 : 2, j = a == 0 ? 2 : 1;
        if (!Cl.entry(i, j, 1, 1).is_zero() || !Cl.entry(i, j, 2, 2).is_zero())
            throw structural_error("solve_q_branches: unsupported off-diagonal coupling");
    }
    Coefficient m11 = one - Q2 * Cl.entry(1, 2, 1, 2);
    Coefficient m12 = -(Q2 * Cl.entry(1, 2, 2, 1));
    Coefficient m21 = -(Q2 * Cl.entry(2, 1, 1, 2));
    Coefficient m22 = one - Q2 * Cl.entry(2, 1, 2, 1);
    Coefficient det = m11 * m22 - m12 * m21;

    // Factor the eliminated scalar against the candidate branch conditions.
    std::vector<Coefficient> candidates{one + Q2, diag_cond};
    std::vector<Coefficient> factors;
    Coefficient rest = det;
    for (const auto& f : candidates) {
        while (true) {
            auto quot = try_divide_exact(rest, f);
            if (!quot) break;
            factors.push_back(f);
            rest = *quot;
        }
    }
    if (!rest.is_invertible_monomial())
        throw structural_error("solve_q_branches: eliminated scalar did not factor into branch "
                               "conditions; remainder " +
                               rest.to_string());
    if (!rest.is_one()) factors.push_back(rest);
    Coefficient product = one;
    for (const auto& f : factors) product *= f;
    if (product != det)
        throw structural_error("solve_q_branches: factor product does not match the scalar");

    QBranchSolve out;
    out.eliminated_scalar = det;
    out.evidence_factors = factors;
    out.diagonal_condition = diag_cond;

    out.branches.push_back(QBranch{QBranchLabel::cubic_root, "Q^2 + Q + 1 = 0",
                                   "[3]_Q = 0: the prefactored relations vanish and no binary "
                                   "relations on d2x, d2y arise"});
    bool has_diag = false, has_imaginary = false;
    for (const auto& f : factors) {
        if (f == diag_cond) has_diag = true;
        if (f == one + Q2) has_imaginary = true;
    }
    if (has_diag || !diag_cond.is_zero()) {
        std::string dstr = d11.to_string();
        out.branches.push_back(QBranch{QBranchLabel::inverse_sqrt_r_plus,
                                       "s^2 = " + dstr + ", Q = 1/s", "Q^2 = 1/" + dstr});
        out.branches.push_back(QBranch{QBranchLabel::inverse_sqrt_r_minus,
                                       "s^2 = " + dstr + ", Q = -1/s", "Q^2 = 1/" + dstr});
    }
    if (has_imaginary)
        out.branches.push_back(QBranch{QBranchLabel::imaginary_unit, "Q^2 + 1 = 0",
                                       "covers Q = i and Q = -i; the paper prints i"});
    return out;
}

BranchContext branch_context(QBranchLabel label) {
    BranchContext ctx;
    switch (label) {
        case QBranchLabel::cubic_root: {
            TermMap poly;
            poly.emplace(ExpVec{0, 0, 2}, GaussianRational(1));
            poly.emplace(ExpVec{0, 0, 1}, GaussianRational(1));
            poly.emplace(ExpVec{0, 0, 0}, GaussianRational(1));
            ctx.ring = SymRing::make({{"q", true}, {"r", true}, {"Q", true}}, {poly});
            ctx.Q = Coefficient::symbol(ctx.ring, "Q");
            ctx.description = "Q a primitive cubic root of unity (Q^2 + Q + 1 = 0)";
            return ctx;
        }
        case QBranchLabel::imaginary_unit: {
            TermMap poly;
            poly.emplace(ExpVec{0, 0, 2}, GaussianRational(1));
            poly.emplace(ExpVec{0, 0, 0}, GaussianRational(1));
            ctx.ring = SymRing::make({{"q", true}, {"r", true}, {"Q", true}}, {poly});
            ctx.Q = Coefficient::symbol(ctx.ring, "Q");
            ctx.description = "Q = i (Q^2 + 1 = 0)";
            return ctx;
        }
        case QBranchLabel::inverse_sqrt_r_plus:
        case QBranchLabel::inverse_sqrt_r_minus: {
            TermMap poly;
            poly.emplace(ExpVec{0, 0, 2}, GaussianRational(1));
            poly.emplace(ExpVec{0, 1, 0}, GaussianRational(-1));
            ctx.ring = SymRing::make({{"q", true}, {"r", true}, {"s", true}}, {poly});
            Coefficient sinv = Coefficient::symbol(ctx.ring, "s").inverse();
            bool plus = label == QBranchLabel::inverse_sqrt_r_plus;
            ctx.Q = plus ? sinv : -sinv;
            ctx.description = plus ? "Q = 1/sqrt(r) (s^2 = r, Q = 1/s)"
                                   : "Q = -1/sqrt(r) (s^2 = r, Q = -1/s)";
            return ctx;
        }
    }
    throw structural_error("unknown branch label");
}

SecondOrderPlane second_order_plane(const StructureMatrix& C, QBranchLabel branch) {
    if (branch == QBranchLabel::cubic_root)
        throw branch_refusal("cubic_root branch refused: for Q a primitive cubic root of unity "
                             "d2x and d2y can not satisfy any particular binary relations");
    SecondOrderPlane out;
    out.context = branch_context(branch);
    AlphabetPtr alphabet = case_alphabet();
    StructureMatrix Cl = C.to_ring(out.context.ring);
    D2xD2xRelations dd = derive_d2x_d2x_relations(alphabet, Cl, out.context.Q);
    if (!dd.reduced)
        throw structural_error("[3]_Q vanished outside the cubic branch");
    out.instantiated = *dd.reduced;
    OrientOptions opts;
    opts.cancel_content = true;
    out.relations = orient_relations(out.instantiated, opts);
    return out;
}

// ---------------------------------------------------------------------------
// GL_q(2) / GL_{r,q}(2) relation blocks

namespace {

AlphabetPtr entries_alphabet() {
    return Alphabet::of({GeneratorInfo{"alpha", 0, 1}, GeneratorInfo{"beta", 0, 2},
                         GeneratorInfo{"gamma", 0, 3}, GeneratorInfo{"delta", 0, 4}});
}

struct EntryAlgebra {
    AlphabetPtr alphabet;
    RingPtr ring;

    Element w(const char* a, const char* b) const {
        Word word{alphabet->id_of(a), alphabet->id_of(b)};
        return Element::from_word(alphabet, ring, word, Coefficient::one(ring));
    }
};

} // namespace

GlqRelations glq2_relations(GlqKind kind, const RingPtr& ring) {
    GlqRelations out;
    out.alphabet = entries_alphabet();
    out.ring = ring;
    EntryAlgebra A{out.alphabet, ring};
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient r = Coefficient::symbol(ring, "r");
    Coefficient one = Coefficient::one(ring);

    switch (kind) {
        case GlqKind::standard_q: {
            Element ab = A.w("alpha", "beta") - A.w("beta", "alpha").scaled(q);
            Element ag = A.w("alpha", "gamma") - A.w("gamma", "alpha").scaled(q);
            Element bg = A.w("beta", "gamma") - A.w("gamma", "beta");
            Element gd_raw = A.w("gamma", "delta") - A.w("delta", "beta").scaled(q);
            Element gd_fixed = A.w("gamma", "delta") - A.w("delta", "gamma").scaled(q);
            Element bd = A.w("beta", "delta") - A.w("delta", "beta").scaled(q);
            Element ad = A.w("alpha", "delta") - A.w("delta", "alpha") -
                         A.w("beta", "gamma").scaled(q - q.inverse());
            out.raw = {ab, ag, bg, gd_raw, bd, ad};
            out.corrected = {ab, ag, bg, gd_fixed, bd, ad};
            out.notes = {"printed 'gamma delta = q delta beta' read as gamma delta = q delta "
                         "gamma in the corrected set"};
            break;
        }
        case GlqKind::rq_family1: {
            Coefficient rq = r * q.inverse();
            Element ab = A.w("alpha", "beta") - A.w("beta", "alpha").scaled(rq);
            Element ag = A.w("alpha", "gamma") - A.w("gamma", "alpha").scaled(q);
            Element bg = A.w("beta", "gamma").scaled(rq) - A.w("gamma", "beta").scaled(q);
            Element bd_raw1 = A.w("beta", "delta") - A.w("delta", "beta").scaled(rq);
            Element bd = A.w("beta", "delta") - A.w("delta", "beta").scaled(q);
            Element gd_fixed = A.w("gamma", "delta") - A.w("delta", "gamma").scaled(rq);
            Element ad_gb = A.w("alpha", "delta") - A.w("delta", "alpha") -
                            A.w("gamma", "beta").scaled(q - rq.inverse());
            Element ad_bg = A.w("alpha", "delta") - A.w("delta", "alpha") -
                            A.w("beta", "gamma").scaled(rq - q.inverse());
            out.raw = {ab, ag, bg, bd_raw1, bd, ad_gb, ad_bg};
            out.corrected = {ab, ag, bg, gd_fixed, bd, ad_bg};
            out.notes = {"the duplicated line 'beta delta = (r/q) delta beta' read as gamma "
                         "delta = (r/q) delta gamma in the corrected set",
                         "both printed forms of the alpha-delta relation are carried in the raw "
                         "set; they agree modulo the beta-gamma relation"};
            break;
        }
        case GlqKind::rq_family2: {
            Coefficient rqinv = (r * q).inverse();
            Element ab = A.w("alpha", "beta") - A.w("beta", "alpha").scaled(rqinv);
            Element ag = A.w("alpha", "gamma") - A.w("gamma", "alpha").scaled(q);
            Element bg = A.w("beta", "gamma").scaled(q.inverse()) -
                         A.w("gamma", "beta").scaled(r * q);
            Element gd_raw = A.w("gamma", "delta") - A.w("delta", "beta").scaled(rqinv);
            Element gd_fixed = A.w("gamma", "delta") - A.w("delta", "gamma").scaled(rqinv);
            Element bd = A.w("beta", "delta") - A.w("delta", "beta").scaled(q);
            Element ad_gb = A.w("alpha", "delta") - A.w("delta", "alpha") -
                            A.w("gamma", "beta").scaled(q - r * q);
            Element ad_bg = A.w("alpha", "delta") - A.w("delta", "alpha") -
                            A.w("beta", "gamma").scaled(q.inverse() - rqinv);
            out.raw = {ab, ag, bg, gd_raw, bd, ad_gb, ad_bg};
            out.corrected = {ab, ag, bg, gd_fixed, bd, ad_gb};
            out.notes = {"printed 'gamma delta = 1/(rq) delta beta' read as gamma delta = "
                         "1/(rq) delta gamma in the corrected set",
                         "the two printed forms of the alpha-delta relation disagree by a sign "
                         "modulo the beta-gamma relation; the corrected set keeps the "
                         "gamma-beta form (q - rq) gamma beta"};
            break;
        }
    }
    return out;
}

CovarianceReport check_covariance(const RelationSet& plane, int plane_degree,
                                  const GlqRelations& coaction, bool use_corrected) {
    const AlphabetPtr& plane_alphabet = plane.alphabet();
    std::vector<std::string> entry_names;
    for (std::size_t i = 0; i < coaction.alphabet->size(); ++i)
        entry_names.push_back(coaction.alphabet->name(static_cast<int>(i)));
    AlphabetPtr combined = Alphabet::with_entries(plane_alphabet, entry_names);
    const RingPtr& ring = plane.ring();

    // Plane relations, bialgebra relations, and exact cross-commutation of
    // entries with every calculus generator.
    std::vector<Element> relations;
    std::vector<Element> plane_relations = plane.rule_elements();
    for (const auto& rho : plane.residuals()) plane_relations.push_back(rho);
    for (const auto& rho : plane_relations) relations.push_back(transplant(rho, combined, ring));
    const auto& source = use_corrected ? coaction.corrected : coaction.raw;
    for (const auto& rho : source) relations.push_back(transplant(rho, combined, ring));
    for (const auto& ename : entry_names) {
        int e = combined->id_of(ename);
        for (std::size_t g = 0; g < plane_alphabet->size(); ++g) {
            int gid = combined->id_of(plane_alphabet->name(static_cast<int>(g)));
            Element rel(combined, ring);
            rel.add_term(Word{e, gid}, Coefficient::one(ring));
            rel.add_term(Word{gid, e}, -Coefficient::one(ring));
            relations.push_back(std::move(rel));
        }
    }
    OrientOptions opts;
    opts.cancel_content = true;
    RelationSet rs = orient_relations(relations, opts);

    // Coaction images: g_i -> sum_j entries[i][j] g_j for the two plane
    // generators of the given degree.
    std::array<std::array<std::string, 2>, 2> entries{
        {{entry_names[0], entry_names[1]}, {entry_names[2], entry_names[3]}}};
    auto image = [&](int index) {
        Element img(combined, ring);
        for (int j = 0; j < 2; ++j) {
            int e = combined->id_of(entries[static_cast<std::size_t>(index - 1)]
                                           [static_cast<std::size_t>(j)]);
            int g = combined->id_of(plane_alphabet->name(
                plane_alphabet->id_of(plane_degree, j + 1)));
            img.add_term(Word{e, g}, Coefficient::one(ring));
        }
        return img;
    };

    CovarianceReport report;
    for (const auto& rho : plane_relations) {
        Element substituted(combined, ring);
        for (const auto& [w, c] : rho.terms()) {
            Element prod = Element::unit(combined, ring).scaled(c.to_ring(ring));
            for (int id : w) {
                int index = rho.alphabet()->gen(id).index;
                prod = prod * image(index);
            }
            substituted += prod;
        }
        Element residue = normal_form(substituted, rs);
        CovarianceItem item;
        item.relation = rho.to_string();
        item.ok = residue.is_zero();
        item.residue = residue.to_string();
        if (!item.ok) report.all_ok = false;
        report.items.push_back(std::move(item));
    }
    return report;
}

} // namespace derham
