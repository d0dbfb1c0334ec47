#include "derham/freealg.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace derham {

// ---------------------------------------------------------------------------
// Alphabet

AlphabetPtr Alphabet::calculus(const std::vector<std::string>& coordinate_names) {
    std::vector<GeneratorInfo> gens;
    int n = static_cast<int>(coordinate_names.size());
    for (int d = 2; d >= 0; --d)
        for (int i = 0; i < n; ++i) {
            std::string prefix = d == 2 ? "d2" : d == 1 ? "d" : "";
            gens.push_back(GeneratorInfo{prefix + coordinate_names[static_cast<std::size_t>(i)],
                                         d, i + 1});
        }
    return of(std::move(gens));
}

AlphabetPtr Alphabet::with_entries(const AlphabetPtr& base,
                                   const std::vector<std::string>& entry_names) {
    std::vector<GeneratorInfo> gens;
    int zero_index = 0;
    for (std::size_t i = 0; i < base->size(); ++i) {
        gens.push_back(base->gen(static_cast<int>(i)));
        if (gens.back().degree == 0) zero_index = std::max(zero_index, gens.back().index);
    }
    for (const auto& name : entry_names)
        gens.push_back(GeneratorInfo{name, 0, ++zero_index});
    return of(std::move(gens));
}

AlphabetPtr Alphabet::of(std::vector<GeneratorInfo> generators) {
    auto a = std::make_shared<Alphabet>();
    a->gens_ = std::move(generators);
    // Canonical order check: degree-descending blocks, index-ascending.
    for (std::size_t i = 1; i < a->gens_.size(); ++i) {
        const auto& p = a->gens_[i - 1];
        const auto& c = a->gens_[i];
        bool ok = (p.degree > c.degree) || (p.degree == c.degree && p.index < c.index);
        if (!ok) throw structural_error("alphabet generators out of canonical order");
    }
    std::set<std::string> names;
    for (const auto& g : a->gens_)
        if (!names.insert(g.name).second)
            throw structural_error("duplicate generator name: " + g.name);
    return a;
}

int Alphabet::id_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    return -1;
}

int Alphabet::id_of(int degree, int index) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].degree == degree && gens_[i].index == index) return static_cast<int>(i);
    return -1;
}

bool Alphabet::same_structure(const Alphabet& o) const {
    if (gens_.size() != o.gens_.size()) return false;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name != o.gens_[i].name || gens_[i].degree != o.gens_[i].degree)
            return false;
    return true;
}

int word_grade(const AlphabetPtr& alphabet, const Word& w) {
    int g = 0;
    for (int id : w) g += alphabet->degree(id);
    return g;
}

std::string word_to_string(const AlphabetPtr& alphabet, const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += "*";
        s += alphabet->name(w[i]);
    }
    return s;
}

bool word_less(const Word& u, const Word& v) { return WordOrder{}(u, v); }

// ---------------------------------------------------------------------------
// Element

Element Element::unit(AlphabetPtr alphabet, RingPtr ring) {
    Element e(alphabet, ring);
    e.terms_.emplace(Word{}, Coefficient::one(ring));
    return e;
}

Element Element::generator(const AlphabetPtr& alphabet, const RingPtr& ring,
                           const std::string& name) {
    int id = alphabet->id_of(name);
    if (id < 0) throw structural_error("unknown generator: " + name);
    return from_word(alphabet, ring, Word{id}, Coefficient::one(ring));
}

Element Element::from_word(AlphabetPtr alphabet, RingPtr ring, Word w, Coefficient c) {
    Element e(std::move(alphabet), std::move(ring));
    e.add_term(w, c);
    return e;
}

void Element::add_term(const Word& w, const Coefficient& c) {
    if (c.is_zero()) return;
    for (int id : w)
        if (id < 0 || static_cast<std::size_t>(id) >= alphabet_->size())
            throw structural_error("word references an unknown generator id");
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_.emplace(w, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void Element::check_compat(const Element& o) const {
    if (!alphabet_ || !o.alphabet_) throw structural_error("operation on empty element");
    if (alphabet_ != o.alphabet_ && !alphabet_->same_structure(*o.alphabet_))
        throw structural_error("elements over different alphabets");
}

Element Element::operator-() const {
    Element out(alphabet_, ring_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
    return out;
}

Element Element::operator+(const Element& o) const {
    Element out = *this;
    out += o;
    return out;
}

Element Element::operator-(const Element& o) const {
    Element out = *this;
    out -= o;
    return out;
}

Element& Element::operator+=(const Element& o) {
    check_compat(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
}

Element& Element::operator-=(const Element& o) {
    check_compat(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
}

Element Element::operator*(const Element& o) const {
    check_compat(o);
    Element out(alphabet_, ring_);
    for (const auto& [w1, c1] : terms_)
        for (const auto& [w2, c2] : o.terms_) {
            Word w = w1;
            w.insert(w.end(), w2.begin(), w2.end());
            out.add_term(w, c1 * c2);
        }
    return out;
}

Element Element::scaled(const Coefficient& c) const {
    Element out(alphabet_, ring_);
    if (c.is_zero()) return out;
    for (const auto& [w, k] : terms_) out.add_term(w, k * c);
    return out;
}

bool Element::operator==(const Element& o) const {
    check_compat(o);
    if (terms_.size() != o.terms_.size()) return false;
    auto it = terms_.begin();
    auto jt = o.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (it->first != jt->first || it->second != jt->second) return false;
    return true;
}

std::optional<int> Element::homogeneous_grade() const {
    std::optional<int> g;
    for (const auto& [w, c] : terms_) {
        int wg = word_grade(alphabet_, w);
        if (!g)
            g = wg;
        else if (*g != wg)
            return std::nullopt;
    }
    return g;
}

std::optional<Word> Element::leading_word() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
}

Coefficient Element::coeff(const Word& w) const {
    auto it = terms_.find(w);
    if (it == terms_.end()) return Coefficient::zero(ring_);
    return it->second;
}

std::string Element::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        std::string cs = c.to_string();
        bool neg = false;
        if (cs.size() > 1 && cs[0] == '-' && cs.find(" + ") == std::string::npos &&
            cs.find(" - ") == std::string::npos) {
            neg = true;
            cs = cs.substr(1);
        }
        bool is_one = (cs == "1");
        bool needs_parens = cs.find(' ') != std::string::npos;
        std::string body;
        if (w.empty())
            body = needs_parens ? "(" + cs + ")" : cs;
        else if (is_one)
            body = word_to_string(alphabet_, w);
        else if (needs_parens)
            body = "(" + cs + ") * " + word_to_string(alphabet_, w);
        else
            body = cs + " * " + word_to_string(alphabet_, w);
        if (first) {
            s += (neg ? "-" : "") + body;
            first = false;
        } else {
            s += (neg ? " - " : " + ") + body;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// RelationSet

void RelationSet::add_rule(Word lhs, Element rhs) {
    if (lhs.size() != 2) throw structural_error("rewrite rule lhs must have length 2");
    int lhs_grade = word_grade(alphabet_, lhs);
    for (const auto& [w, c] : rhs.terms()) {
        if (!word_less(w, lhs))
            throw structural_error("rewrite rule rhs word not smaller than lhs");
        if (word_grade(alphabet_, w) != lhs_grade)
            throw structural_error("rewrite rule mixes grades");
    }
    if (rules_.count(lhs)) throw structural_error("duplicate rule lhs");
    rules_.emplace(std::move(lhs), std::move(rhs));
}

void RelationSet::add_residual(Element e) {
    if (!e.is_zero()) residuals_.push_back(std::move(e));
}

const Element* RelationSet::rule_for(int a, int b) const {
    auto it = rules_.find(Word{a, b});
    if (it == rules_.end()) return nullptr;
    return &it->second;
}

std::vector<Element> RelationSet::rule_elements() const {
    std::vector<Element> out;
    for (const auto& [lhs, rhs] : rules_) {
        Element e = Element::from_word(alphabet_, ring_, lhs, Coefficient::one(ring_));
        e -= rhs;
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orientation

namespace {

// Linear reduction for quadratic rows: whole length-2 words replaced by rule
// right-hand sides until none matches.
Element linear_reduce(Element e, const std::map<Word, Element, WordOrder>& rules) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [w, c] : e.terms()) {
            auto it = rules.find(w);
            if (it == rules.end()) continue;
            Element delta = it->second.scaled(c);
            e.add_term(w, -c);
            e += delta;
            changed = true;
            break;
        }
    }
    return e;
}

} // namespace

RelationSet orient_relations(const std::vector<Element>& relations, const OrientOptions& options) {
    if (relations.empty()) return RelationSet();
    AlphabetPtr alphabet = relations.front().alphabet();
    RingPtr ring = relations.front().ring();
    RelationSet rs(alphabet, ring);

    std::vector<Element> pending;
    for (const auto& r : relations) {
        if (r.is_zero()) continue;
        for (const auto& [w, c] : r.terms())
            if (w.size() != 2)
                throw structural_error("orient_relations requires length-2 words, got: " +
                                       word_to_string(alphabet, w));
        if (!r.homogeneous_grade())
            throw structural_error("orient_relations requires grade-homogeneous relations");
        pending.push_back(r);
    }

    std::map<Word, Element, WordOrder> rules;
    auto install = [&](const Word& lhs, Element rhs) {
        rules[lhs] = std::move(rhs);
        for (auto& [w, r] : rules) r = linear_reduce(std::move(r), rules);
    };

    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& row : pending) row = linear_reduce(std::move(row), rules);
        pending.erase(std::remove_if(pending.begin(), pending.end(),
                                     [](const Element& e) { return e.is_zero(); }),
                      pending.end());

        // Unit-monomial pivots first, preferring the largest leading word.
        int best = -1;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            auto lead = pending[i].leading_word();
            if (!pending[i].coeff(*lead).is_invertible_monomial()) continue;
            if (best < 0 || word_less(*pending[static_cast<std::size_t>(best)].leading_word(),
                                      *lead))
                best = static_cast<int>(i);
        }
        if (best < 0 && options.cancel_content) {
            for (std::size_t i = 0; i < pending.size(); ++i) {
                const Element& row = pending[i];
                Word lead = *row.leading_word();
                Coefficient lc = row.coeff(lead);
                if (!lc.is_cancellable()) continue;
                bool divides = true;
                for (const auto& [w, c] : row.terms()) {
                    if (w == lead) continue;
                    if (!try_divide_exact(c, lc)) {
                        divides = false;
                        break;
                    }
                }
                if (!divides) continue;
                if (best < 0 || word_less(*pending[static_cast<std::size_t>(best)].leading_word(),
                                          lead))
                    best = static_cast<int>(i);
            }
        }
        if (best >= 0) {
            Element row = pending[static_cast<std::size_t>(best)];
            pending.erase(pending.begin() + best);
            Word lead = *row.leading_word();
            Coefficient lc = row.coeff(lead);
            Element rhs(alphabet, ring);
            if (lc.is_invertible_monomial()) {
                Coefficient inv = lc.inverse();
                for (const auto& [w, c] : row.terms())
                    if (w != lead) rhs.add_term(w, -(c * inv));
            } else {
                for (const auto& [w, c] : row.terms()) {
                    if (w == lead) continue;
                    auto q = try_divide_exact(c, lc);
                    rhs.add_term(w, -*q);
                }
            }
            install(lead, std::move(rhs));
            progress = true;
        }
    }

    for (const auto& [lhs, rhs] : rules) rs.add_rule(lhs, rhs);
    std::vector<Element> residuals;
    for (auto& row : pending) {
        row = linear_reduce(std::move(row), rules);
        if (row.is_zero()) continue;
        bool dup = false;
        for (const auto& r : residuals)
            if (r == row) dup = true;
        if (!dup) residuals.push_back(row);
    }
    for (auto& r : residuals) rs.add_residual(std::move(r));
    return rs;
}

// ---------------------------------------------------------------------------
// Normal form

namespace {

// Position of the first reducible factor, or -1.
int find_redex(const Word& w, const RelationSet& rs) {
    if (w.size() < 2) return -1;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (rs.rule_for(w[i], w[i + 1])) return static_cast<int>(i);
    return -1;
}

std::vector<int> all_redexes(const Word& w, const RelationSet& rs) {
    std::vector<int> out;
    if (w.size() < 2) return out;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (rs.rule_for(w[i], w[i + 1])) out.push_back(static_cast<int>(i));
    return out;
}

Element reduce_with_picker(const Element& e, const RelationSet& rs,
                           const std::function<int(const Word&)>& pick) {
    Element out(e.alphabet(), e.ring());
    std::deque<std::pair<Word, Coefficient>> work(e.terms().begin(), e.terms().end());
    long guard = 0;
    while (!work.empty()) {
        if (++guard > 5000000) throw error("normal form did not terminate (guard tripped)");
        auto [w, c] = work.front();
        work.pop_front();
        if (c.is_zero()) continue;
        int pos = pick(w);
        if (pos < 0) {
            out.add_term(w, c);
            continue;
        }
        const Element* rhs = rs.rule_for(w[static_cast<std::size_t>(pos)],
                                         w[static_cast<std::size_t>(pos) + 1]);
        for (const auto& [rw, rc] : rhs->terms()) {
            Word nw(w.begin(), w.begin() + pos);
            nw.insert(nw.end(), rw.begin(), rw.end());
            nw.insert(nw.end(), w.begin() + pos + 2, w.end());
            work.emplace_back(std::move(nw), c * rc);
        }
    }
    return out;
}

} // namespace

Element normal_form(const Element& e, const RelationSet& rs) {
    if (rs.rules().empty()) return e;
    return reduce_with_picker(e, rs, [&](const Word& w) { return find_redex(w, rs); });
}

Element normal_form_random(const Element& e, const RelationSet& rs, std::mt19937& rng) {
    if (rs.rules().empty()) return e;
    return reduce_with_picker(e, rs, [&](const Word& w) -> int {
        auto redexes = all_redexes(w, rs);
        if (redexes.empty()) return -1;
        std::uniform_int_distribution<std::size_t> dist(0, redexes.size() - 1);
        return redexes[dist(rng)];
    });
}

Element multiply(const Element& a, const Element& b, const RelationSet& rs) {
    return normal_form(a * b, rs);
}

std::vector<CriticalPair> critical_pairs(const RelationSet& rs) {
    std::vector<CriticalPair> out;
    for (const auto& [l1, r1] : rs.rules()) {
        for (const auto& [l2, r2] : rs.rules()) {
            if (l1[1] != l2[0]) continue;
            Word overlap{l1[0], l1[1], l2[1]};
            Element left = r1 * Element::from_word(rs.alphabet(), rs.ring(), Word{l2[1]},
                                                   Coefficient::one(rs.ring()));
            Element right = Element::from_word(rs.alphabet(), rs.ring(), Word{l1[0]},
                                               Coefficient::one(rs.ring())) *
                            r2;
            CriticalPair cp;
            cp.overlap = std::move(overlap);
            cp.left_nf = normal_form(left, rs);
            cp.right_nf = normal_form(right, rs);
            cp.resolved = (cp.left_nf == cp.right_nf);
            out.push_back(std::move(cp));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Residual membership

namespace {

void enumerate_words(const AlphabetPtr& alphabet, int len, std::vector<Word>& out) {
    if (len == 0) {
        out.push_back(Word{});
        return;
    }
    std::vector<Word> shorter;
    enumerate_words(alphabet, len - 1, shorter);
    for (const auto& w : shorter)
        for (std::size_t g = 0; g < alphabet->size(); ++g) {
            Word nw = w;
            nw.push_back(static_cast<int>(g));
            out.push_back(std::move(nw));
        }
}

} // namespace

bool reduces_to_zero(const Element& e, const RelationSet& rs) {
    Element nf = normal_form(e, rs);
    if (nf.is_zero()) return true;
    if (rs.residuals().empty()) return false;

    std::size_t max_len = 0;
    std::set<int> grades;
    for (const auto& [w, c] : nf.terms()) {
        max_len = std::max(max_len, w.size());
        grades.insert(word_grade(nf.alphabet(), w));
    }

    // Span of the residual ideal truncated at the lengths present in nf.
    std::vector<Element> basis;
    int pad = static_cast<int>(max_len) - 2;
    std::vector<std::vector<Word>> words_by_len;
    for (int l = 0; l <= std::max(pad, 0); ++l) {
        std::vector<Word> ws;
        enumerate_words(nf.alphabet(), l, ws);
        words_by_len.push_back(std::move(ws));
    }
    for (const auto& rho : rs.residuals()) {
        auto rho_grade = rho.homogeneous_grade();
        for (int lu = 0; lu <= std::max(pad, 0); ++lu)
            for (int lv = 0; lu + lv <= std::max(pad, 0); ++lv)
                for (const auto& u : words_by_len[static_cast<std::size_t>(lu)])
                    for (const auto& v : words_by_len[static_cast<std::size_t>(lv)]) {
                        if (rho_grade) {
                            int g = word_grade(nf.alphabet(), u) + *rho_grade +
                                    word_grade(nf.alphabet(), v);
                            if (!grades.count(g)) continue;
                        }
                        Element ext =
                            Element::from_word(nf.alphabet(), nf.ring(), u,
                                               Coefficient::one(nf.ring())) *
                            rho *
                            Element::from_word(nf.alphabet(), nf.ring(), v,
                                               Coefficient::one(nf.ring()));
                        Element ext_nf = normal_form(ext, rs);
                        if (!ext_nf.is_zero()) basis.push_back(std::move(ext_nf));
                    }
    }

    // Light echelonization: eliminate leading words of later rows with
    // earlier ones where the coefficient ratio divides exactly.
    std::sort(basis.begin(), basis.end(), [](const Element& a, const Element& b) {
        return word_less(*b.leading_word(), *a.leading_word());
    });
    for (std::size_t i = 0; i < basis.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (basis[i].is_zero()) break;
            Word lead = *basis[i].leading_word();
            Coefficient cj = basis[j].coeff(lead);
            if (cj.is_zero()) continue;
            auto mu = try_divide_exact(basis[i].coeff(lead), cj);
            if (mu) basis[i] -= basis[j].scaled(*mu);
        }
    }
    basis.erase(std::remove_if(basis.begin(), basis.end(),
                               [](const Element& b) { return b.is_zero(); }),
                basis.end());

    bool progress = true;
    while (progress && !nf.is_zero()) {
        progress = false;
        for (const auto& b : basis) {
            Word lead = *b.leading_word();
            Coefficient ct = nf.coeff(lead);
            if (ct.is_zero()) continue;
            Coefficient cb = b.coeff(lead);
            std::optional<Coefficient> mu;
            if (cb.is_invertible_monomial())
                mu = ct * cb.inverse();
            else
                mu = try_divide_exact(ct, cb);
            if (!mu) continue;
            nf -= b.scaled(*mu);
            progress = true;
            if (nf.is_zero()) break;
        }
    }
    return nf.is_zero();
}

Element transplant(const Element& e, const AlphabetPtr& alphabet, const RingPtr& ring) {
    Element out(alphabet, ring);
    for (const auto& [w, c] : e.terms()) {
        Word nw;
        nw.reserve(w.size());
        for (int id : w) {
            int nid = alphabet->id_of(e.alphabet()->name(id));
            if (nid < 0)
                throw structural_error("generator " + e.alphabet()->name(id) +
                                       " is absent from the target alphabet");
            nw.push_back(nid);
        }
        out.add_term(nw, c.to_ring(ring));
    }
    return out;
}

} // namespace derham
