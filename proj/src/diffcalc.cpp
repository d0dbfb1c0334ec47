#include "derham/diffcalc.hpp"

namespace derham {

namespace {

int gen_id(const AlphabetPtr& alphabet, int degree, int index) {
    int id = alphabet->id_of(degree, index);
    if (id < 0)
        throw structural_error("alphabet lacks generator of degree " + std::to_string(degree) +
                               ", index " + std::to_string(index));
    return id;
}

} // namespace

std::vector<Element> x_x_relations(const AlphabetPtr& alphabet, const StructureMatrix& B) {
    const RingPtr& ring = B.m.ring();
    const int n = B.n;
    std::vector<Element> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Element e(alphabet, ring);
            e.add_term(Word{gen_id(alphabet, 0, i), gen_id(alphabet, 0, j)},
                       Coefficient::one(ring));
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l)
                    e.add_term(Word{gen_id(alphabet, 0, k), gen_id(alphabet, 0, l)},
                               -B.entry(i, j, k, l));
            if (!e.is_zero()) out.push_back(std::move(e));
        }
    return out;
}

std::vector<Element> x_dx_relations(const AlphabetPtr& alphabet, const StructureMatrix& C) {
    const RingPtr& ring = C.m.ring();
    const int n = C.n;
    std::vector<Element> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Element e(alphabet, ring);
            e.add_term(Word{gen_id(alphabet, 0, i), gen_id(alphabet, 1, j)},
                       Coefficient::one(ring));
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l)
                    e.add_term(Word{gen_id(alphabet, 1, k), gen_id(alphabet, 0, l)},
                               -C.entry(i, j, k, l));
            if (!e.is_zero()) out.push_back(std::move(e));
        }
    return out;
}

std::vector<Element> derive_x_d2x_relations(const AlphabetPtr& alphabet, const StructureMatrix& C,
                                            const Coefficient& Q) {
    const RingPtr& ring = C.m.ring();
    const int n = C.n;
    std::vector<Element> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Element e(alphabet, ring);
            e.add_term(Word{gen_id(alphabet, 0, i), gen_id(alphabet, 2, j)},
                       Coefficient::one(ring));
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    const Coefficient& c = C.entry(i, j, k, l);
                    e.add_term(Word{gen_id(alphabet, 2, k), gen_id(alphabet, 0, l)}, -c);
                    Coefficient dxdx = Q * c;
                    if (k == i && l == j) dxdx -= Coefficient::one(ring);
                    e.add_term(Word{gen_id(alphabet, 1, k), gen_id(alphabet, 1, l)}, -dxdx);
                }
            if (!e.is_zero()) out.push_back(std::move(e));
        }
    return out;
}

std::vector<Element> derive_dx_d2x_relations(const AlphabetPtr& alphabet, const StructureMatrix& C,
                                             const Coefficient& Q) {
    const RingPtr& ring = C.m.ring();
    const int n = C.n;
    Coefficient two_q = q_integer(2, Q);
    std::vector<Element> out;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Element e(alphabet, ring);
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    const Coefficient& c = C.entry(i, j, k, l);
                    Coefficient lhs = -(Q * Q * c);
                    if (k == i && l == j) lhs += two_q;
                    e.add_term(Word{gen_id(alphabet, 1, k), gen_id(alphabet, 2, l)}, lhs);
                    Coefficient rhs = two_q * Q * c;
                    if (k == i && l == j) rhs -= Coefficient::one(ring);
                    e.add_term(Word{gen_id(alphabet, 2, k), gen_id(alphabet, 1, l)}, -rhs);
                }
            if (!e.is_zero()) out.push_back(std::move(e));
        }
    return out;
}

D2xD2xRelations derive_d2x_d2x_relations(const AlphabetPtr& alphabet, const StructureMatrix& C,
                                         const Coefficient& Q) {
    const RingPtr& ring = C.m.ring();
    const int n = C.n;
    Coefficient three_q = q_integer(3, Q);
    D2xD2xRelations out;
    std::vector<Element> reduced;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Element e(alphabet, ring);
            e.add_term(Word{gen_id(alphabet, 2, i), gen_id(alphabet, 2, j)},
                       Coefficient::one(ring));
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l)
                    e.add_term(Word{gen_id(alphabet, 2, k), gen_id(alphabet, 2, l)},
                               -(Q * Q * C.entry(i, j, k, l)));
            Element pref = e.scaled(three_q);
            if (!pref.is_zero()) out.prefactored.push_back(pref);
            if (!e.is_zero()) reduced.push_back(std::move(e));
        }
    if (!three_q.is_zero()) out.reduced = std::move(reduced);
    return out;
}

FRelations derive_F_relations(const AlphabetPtr& alphabet, const StructureMatrix& F,
                              const Coefficient& Q) {
    const RingPtr& ring = F.m.ring();
    const int n = F.n;
    FRelations out;
    Coefficient q4 = Q.pow(4);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            Element e(alphabet, ring);
            e.add_term(Word{gen_id(alphabet, 0, i), gen_id(alphabet, 2, j)},
                       Coefficient::one(ring));
            Element e2(alphabet, ring);
            e2.add_term(Word{gen_id(alphabet, 2, i), gen_id(alphabet, 2, j)},
                        Coefficient::one(ring));
            for (int k = 1; k <= n; ++k)
                for (int l = 1; l <= n; ++l) {
                    const Coefficient& f = F.entry(i, j, k, l);
                    e.add_term(Word{gen_id(alphabet, 2, k), gen_id(alphabet, 0, l)}, -f);
                    e2.add_term(Word{gen_id(alphabet, 2, k), gen_id(alphabet, 2, l)}, -(q4 * f));
                }
            if (!e.is_zero()) out.x_d2x.push_back(std::move(e));
            if (!e2.is_zero()) out.d2x_d2x.push_back(std::move(e2));
        }
    return out;
}

CalculusSpec assemble_calculus(int n, const AlphabetPtr& alphabet, const StructureMatrix& B,
                               const StructureMatrix& C, std::optional<StructureMatrix> F,
                               const Coefficient& Q) {
    CalculusSpec spec;
    spec.n = n;
    spec.alphabet = alphabet;
    spec.ring = C.m.ring();
    spec.B = B;
    spec.C = C;
    spec.F = F;
    spec.Q = Q;

    spec.xx_relations = x_x_relations(alphabet, B);
    spec.xdx_relations = x_dx_relations(alphabet, C);
    spec.xd2x_relations = derive_x_d2x_relations(alphabet, C, Q);
    spec.dxd2x_relations = derive_dx_d2x_relations(alphabet, C, Q);

    std::vector<Element> all;
    auto append = [&all](const std::vector<Element>& v) {
        all.insert(all.end(), v.begin(), v.end());
    };
    append(spec.xx_relations);
    append(spec.xdx_relations);
    append(spec.xd2x_relations);
    append(spec.dxd2x_relations);
    if (F) {
        FRelations fr = derive_F_relations(alphabet, *F, Q);
        spec.xd2x_F_relations = fr.x_d2x;
        spec.d2xd2x_relations = fr.d2x_d2x;
        append(fr.x_d2x);
        append(fr.d2x_d2x);
    } else {
        D2xD2xRelations dd = derive_d2x_d2x_relations(alphabet, C, Q);
        if (dd.reduced) {
            spec.d2xd2x_relations = *dd.reduced;
            append(*dd.reduced);
        }
    }
    OrientOptions opts;
    opts.cancel_content = true;
    spec.relations = orient_relations(all, opts);
    return spec;
}

Element apply_d_raw(const Element& e, const AlphabetPtr& alphabet, const Coefficient& Q) {
    const RingPtr& ring = Q.ring();
    Element out(alphabet, ring);
    for (const auto& [w, c] : e.terms()) {
        // d over a word: split off one letter at a time from the left;
        // the surviving term for position p carries Q^{grade of prefix}.
        int prefix_grade = 0;
        for (std::size_t p = 0; p < w.size(); ++p) {
            int deg = alphabet->degree(w[p]);
            if (deg < 2) {
                int index = alphabet->gen(w[p]).index;
                int up = alphabet->id_of(deg + 1, index);
                if (up < 0)
                    throw structural_error("no degree-" + std::to_string(deg + 1) +
                                           " generator for " + alphabet->name(w[p]));
                Word nw = w;
                nw[p] = up;
                out.add_term(nw, c * Q.pow(prefix_grade));
            }
            prefix_grade += deg;
        }
    }
    return out;
}

Element apply_d(const Element& e, const CalculusSpec& spec) {
    return normal_form(apply_d_raw(e, spec.alphabet, spec.Q), spec.relations);
}

namespace {

void record(ComplexReport& report, std::vector<ComplexCheckItem>& into, const std::string& label,
            bool ok, const Element& residue) {
    ComplexCheckItem item;
    item.label = label;
    item.ok = ok;
    if (!ok) {
        item.residue = residue.to_string();
        report.ok = false;
        if (report.first_failure.empty())
            report.first_failure = label + " left residue " + item.residue;
    }
    into.push_back(std::move(item));
}

void coordinate_words(const AlphabetPtr& alphabet, int n, int max_len, std::vector<Word>& out) {
    std::vector<Word> current{Word{}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const auto& w : current)
            for (int i = 1; i <= n; ++i) {
                Word nw = w;
                nw.push_back(alphabet->id_of(0, i));
                next.push_back(nw);
            }
        out.insert(out.end(), next.begin(), next.end());
        current = std::move(next);
    }
}

} // namespace

ComplexReport check_complex(const CalculusSpec& spec, int max_len) {
    ComplexReport report;

    // (a) d of every defining relation vanishes on the quotient.
    std::vector<Element> defining = spec.relations.rule_elements();
    for (const auto& r : spec.relations.residuals()) defining.push_back(r);
    int idx = 0;
    for (const auto& rel : defining) {
        Element image = apply_d_raw(rel, spec.alphabet, spec.Q);
        Element nf = normal_form(image, spec.relations);
        bool ok = reduces_to_zero(nf, spec.relations);
        record(report, report.relation_checks,
               "d(relation " + std::to_string(++idx) + ": " + rel.to_string() + ")", ok, nf);
    }

    // (b) d^3 vanishes on coordinate words up to max_len.
    std::vector<Word> words;
    coordinate_words(spec.alphabet, spec.n, max_len, words);
    for (const auto& w : words) {
        Element e = Element::from_word(spec.alphabet, spec.ring, w,
                                       Coefficient::one(spec.ring));
        Element d3 = apply_d(apply_d(apply_d(e, spec), spec), spec);
        bool ok = reduces_to_zero(d3, spec.relations);
        record(report, report.d3_checks, "d^3(" + word_to_string(spec.alphabet, w) + ")", ok, d3);
    }

    // (c) d raises the grade by exactly one on homogeneous elements.
    for (const auto& w : words) {
        Element e = Element::from_word(spec.alphabet, spec.ring, w,
                                       Coefficient::one(spec.ring));
        Element de = apply_d(e, spec);
        auto g = de.homogeneous_grade();
        bool ok = de.is_zero() || (g && *g == word_grade(spec.alphabet, w) + 1);
        record(report, report.grade_checks, "grade d(" + word_to_string(spec.alphabet, w) + ")",
               ok, de);
    }
    return report;
}

} // namespace derham
