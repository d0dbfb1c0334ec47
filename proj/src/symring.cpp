#include "derham/symring.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace derham {

namespace {

ExpVec add_exps(const ExpVec& a, const ExpVec& b) {
    ExpVec out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

void accumulate(TermMap& into, const ExpVec& e, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto it = into.find(e);
    if (it == into.end()) {
        into.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) into.erase(it);
    }
}

// Pure power of a single symbol with positive exponent: candidate rule lhs.
std::optional<std::pair<int, int>> pure_power(const ExpVec& e) {
    int sym = -1, exp = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (sym >= 0) return std::nullopt;
        sym = static_cast<int>(i);
        exp = e[i];
    }
    if (sym < 0 || exp < 1) return std::nullopt;
    return std::make_pair(sym, exp);
}

std::string render_constraint(const SymRing& ring, const ConstraintRule& rule);

} // namespace

int SymRing::id(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name == name) return static_cast<int>(i);
    return -1;
}

int SymRing::require_id(const std::string& name) const {
    int i = id(name);
    if (i < 0) throw config_error("undeclared symbol: " + name);
    return i;
}

const ConstraintRule* SymRing::rule_for(int sym) const {
    for (const auto& r : rules_)
        if (r.sym == sym) return &r;
    return nullptr;
}

bool SymRing::symbol_invertible(int sym) const {
    if (const ConstraintRule* r = rule_for(sym)) return r->inv.has_value();
    return symbols_[static_cast<std::size_t>(sym)].invertible;
}

bool SymRing::same_structure(const SymRing& o) const {
    if (symbols_.size() != o.symbols_.size() || rules_.size() != o.rules_.size()) return false;
    for (std::size_t i = 0; i < symbols_.size(); ++i)
        if (symbols_[i].name != o.symbols_[i].name ||
            symbols_[i].invertible != o.symbols_[i].invertible)
            return false;
    for (std::size_t i = 0; i < rules_.size(); ++i)
        if (rules_[i].sym != o.rules_[i].sym || rules_[i].power != o.rules_[i].power ||
            rules_[i].rhs != o.rules_[i].rhs)
            return false;
    return true;
}

TermMap SymRing::reduce(TermMap in) const {
    if (rules_.empty()) {
        for (auto it = in.begin(); it != in.end();)
            it = it->second.is_zero() ? in.erase(it) : std::next(it);
        return in;
    }
    TermMap out;
    std::deque<std::pair<ExpVec, GaussianRational>> work(in.begin(), in.end());
    long guard = 0;
    while (!work.empty()) {
        if (++guard > 2000000)
            throw error("constraint reduction did not terminate (guard tripped)");
        auto [e, c] = work.front();
        work.pop_front();
        if (c.is_zero()) continue;
        const ConstraintRule* hit = nullptr;
        bool negative = false;
        for (const auto& r : rules_) {
            int exp = e[static_cast<std::size_t>(r.sym)];
            if (exp >= r.power) {
                hit = &r;
                break;
            }
            if (exp < 0) {
                hit = &r;
                negative = true;
                break;
            }
        }
        if (!hit) {
            accumulate(out, e, c);
            continue;
        }
        if (negative) {
            if (!hit->inv)
                throw config_error("negative power of constrained symbol " +
                                   symbols_[static_cast<std::size_t>(hit->sym)].name +
                                   " has no derivable inverse");
            ExpVec base = e;
            base[static_cast<std::size_t>(hit->sym)] += 1;
            for (const auto& [m, mc] : *hit->inv) work.emplace_back(add_exps(base, m), c * mc);
        } else {
            ExpVec base = e;
            base[static_cast<std::size_t>(hit->sym)] -= hit->power;
            for (const auto& [m, mc] : hit->rhs) work.emplace_back(add_exps(base, m), c * mc);
        }
    }
    return out;
}

RingPtr SymRing::make(std::vector<SymbolDecl> symbols, std::vector<TermMap> constraints) {
    auto ring = std::shared_ptr<SymRing>(new SymRing());
    for (const auto& s : symbols) {
        if (s.name.empty()) throw config_error("empty symbol name");
        for (const auto& t : ring->symbols_)
            if (t.name == s.name) throw config_error("duplicate symbol: " + s.name);
    }
    ring->symbols_ = std::move(symbols);
    ring->name_order_.resize(ring->symbols_.size());
    for (std::size_t i = 0; i < ring->symbols_.size(); ++i)
        ring->name_order_[i] = static_cast<int>(i);
    std::sort(ring->name_order_.begin(), ring->name_order_.end(), [&](int a, int b) {
        return ring->symbols_[static_cast<std::size_t>(a)].name <
               ring->symbols_[static_cast<std::size_t>(b)].name;
    });

    const std::size_t n = ring->symbols_.size();
    struct Raw {
        int sym;
        int power;
        TermMap rhs;
    };
    std::vector<Raw> raws;
    for (auto& poly : constraints) {
        for (const auto& [e, c] : poly)
            if (e.size() != n) throw config_error("constraint exponent vector has wrong arity");
        // Orientation: the lead is the largest pure power sym^k, ordering
        // candidates by symbol name then exponent.
        std::optional<std::pair<int, int>> lead;
        GaussianRational lead_coeff;
        for (const auto& [e, c] : poly) {
            auto p = pure_power(e);
            if (!p) continue;
            if (!lead || ring->symbols_[static_cast<std::size_t>(p->first)].name >
                             ring->symbols_[static_cast<std::size_t>(lead->first)].name ||
                (p->first == lead->first && p->second > lead->second)) {
                lead = p;
                lead_coeff = c;
            }
        }
        if (!lead) throw config_error("constraint has no pure-power monomial to orient on");
        TermMap rhs;
        GaussianRational inv_lead = lead_coeff.inverse();
        for (const auto& [e, c] : poly) {
            auto p = pure_power(e);
            if (p && *p == *lead) continue;
            accumulate(rhs, e, -(c * inv_lead));
        }
        raws.push_back(Raw{lead->first, lead->second, std::move(rhs)});
    }

    // Keep the lowest-power rule per symbol; the rest must be consequences.
    std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
        if (a.sym != b.sym) return a.sym < b.sym;
        return a.power < b.power;
    });
    std::vector<Raw> kept;
    std::vector<Raw> extra;
    for (auto& r : raws) {
        if (!kept.empty() && kept.back().sym == r.sym)
            extra.push_back(std::move(r));
        else
            kept.push_back(std::move(r));
    }
    for (const auto& r : kept) {
        ConstraintRule rule;
        rule.sym = r.sym;
        rule.power = r.power;
        rule.rhs = r.rhs;
        ring->rules_.push_back(std::move(rule));
    }

    // Dependency cycle check: sym -> symbols of its rhs, self-loops allowed
    // when the rhs degree stays below the rule power.
    for (const auto& rule : ring->rules_) {
        for (const auto& [e, c] : rule.rhs) {
            int own = e[static_cast<std::size_t>(rule.sym)];
            if (own < 0 || own >= rule.power)
                throw config_error("constraint rhs does not lower the lead symbol");
        }
    }
    std::function<void(int, std::vector<int>&)> visit = [&](int sym, std::vector<int>& stack) {
        if (std::find(stack.begin(), stack.end(), sym) != stack.end())
            throw config_error("cyclic constraint dependencies on symbol " +
                               ring->symbols_[static_cast<std::size_t>(sym)].name);
        const ConstraintRule* r = ring->rule_for(sym);
        if (!r) return;
        stack.push_back(sym);
        for (const auto& [e, c] : r->rhs)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0 && static_cast<int>(i) != sym) visit(static_cast<int>(i), stack);
        stack.pop_back();
    };
    for (const auto& rule : ring->rules_) {
        std::vector<int> stack;
        visit(rule.sym, stack);
    }

    // Reduce every rhs against the other rules until stable.
    for (bool changed = true; changed;) {
        changed = false;
        for (auto& rule : ring->rules_) {
            TermMap red = ring->reduce(rule.rhs);
            if (red != rule.rhs) {
                rule.rhs = std::move(red);
                changed = true;
            }
        }
    }

    // Inverse of the constrained symbol, when derivable.
    for (auto& rule : ring->rules_) {
        const std::size_t sidx = static_cast<std::size_t>(rule.sym);
        bool own_only = true;
        for (const auto& [e, c] : rule.rhs)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0 && i != sidx) own_only = false;
        if (rule.rhs.size() == 1) {
            const auto& [e, c] = *rule.rhs.begin();
            bool invertible = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0 || static_cast<int>(i) == rule.sym) continue;
                if (ring->rule_for(static_cast<int>(i)) != nullptr ||
                    !ring->symbols_[i].invertible)
                    invertible = false;
            }
            if (invertible) {
                ExpVec inv_e(n, 0);
                for (std::size_t i = 0; i < e.size(); ++i) inv_e[i] = -e[i];
                inv_e[sidx] += rule.power - 1;
                TermMap inv;
                inv.emplace(std::move(inv_e), c.inverse());
                rule.inv = ring->reduce(std::move(inv));
            }
        } else if (own_only) {
            // rhs is a polynomial in the symbol itself with number coefficients:
            // sym^power = rhs  =>  modulus m(X) = X^power - rhs,
            // X^-1 = -g(X)/m(0) where m(X) = X g(X) + m(0).
            std::vector<GaussianRational> m(static_cast<std::size_t>(rule.power) + 1);
            m[static_cast<std::size_t>(rule.power)] = GaussianRational(1);
            for (const auto& [e, c] : rule.rhs)
                m[static_cast<std::size_t>(e[sidx])] -= c;
            if (!m[0].is_zero()) {
                GaussianRational scale = -(m[0].inverse());
                TermMap inv;
                for (std::size_t j = 1; j < m.size(); ++j) {
                    if (m[j].is_zero()) continue;
                    ExpVec e(n, 0);
                    e[sidx] = static_cast<int>(j) - 1;
                    inv.emplace(std::move(e), m[j] * scale);
                }
                rule.inv = ring->reduce(std::move(inv));
            }
        }
    }

    // Roots of the modulus (used by the zero-divisor test) and the
    // domain-likeness flag.
    for (auto& rule : ring->rules_) {
        const std::size_t sidx = static_cast<std::size_t>(rule.sym);
        if (rule.power == 1) {
            rule.domain_like = true;
            continue;
        }
        bool constant_rhs = true;
        for (const auto& [e, c] : rule.rhs)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0 && i != sidx) constant_rhs = false;
        if (rule.power == 2 && constant_rhs) {
            // X^2 = b X + c  =>  roots (b +- sqrt(b^2+4c)) / 2.
            GaussianRational b, c;
            for (const auto& [e, g] : rule.rhs)
                (e[sidx] == 1 ? b : c) += g;
            auto d = (b * b + GaussianRational(4) * c).sqrt();
            if (d) {
                GaussianRational half(Rational(1, 2));
                GaussianRational r1 = (b + *d) * half;
                GaussianRational r2 = (b - *d) * half;
                ExpVec zero(n, 0);
                TermMap t1, t2;
                if (!r1.is_zero()) t1.emplace(zero, r1);
                if (!r2.is_zero()) t2.emplace(zero, r2);
                rule.roots.push_back(std::move(t1));
                if (r2 != r1) rule.roots.push_back(std::move(t2));
                rule.domain_like = false;
            } else {
                rule.domain_like = true;
            }
        } else if (rule.power == 2 && rule.rhs.size() == 1) {
            // X^2 = c * m over other symbols: reducible exactly when c is a
            // square in Q(i) and every exponent of m is even.
            const auto& [e, c] = *rule.rhs.begin();
            bool even = true;
            bool other_ok = true;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0 || i == sidx) continue;
                if (e[i] % 2 != 0) even = false;
                if (ring->rule_for(static_cast<int>(i)) != nullptr ||
                    !ring->symbols_[i].invertible)
                    other_ok = false;
            }
            auto cr = c.sqrt();
            if (even && cr && other_ok) {
                ExpVec half_e(n, 0);
                for (std::size_t i = 0; i < e.size(); ++i) half_e[i] = e[i] / 2;
                TermMap t1, t2;
                t1.emplace(half_e, *cr);
                t2.emplace(half_e, -*cr);
                rule.roots.push_back(std::move(t1));
                rule.roots.push_back(std::move(t2));
                rule.domain_like = false;
            } else {
                rule.domain_like = other_ok && !(even && cr);
            }
        } else {
            rule.domain_like = false;
        }
    }

    for (auto& rule : ring->rules_) rule.text = render_constraint(*ring, rule);

    // Dropped duplicate rules must be consequences of the kept ones.
    for (const auto& r : extra) {
        ExpVec e(n, 0);
        e[static_cast<std::size_t>(r.sym)] = r.power;
        TermMap lhs;
        lhs.emplace(std::move(e), GaussianRational(1));
        if (ring->reduce(std::move(lhs)) != ring->reduce(TermMap(r.rhs)))
            throw config_error("inconsistent constraints on symbol " +
                               ring->symbols_[static_cast<std::size_t>(r.sym)].name);
    }
    return ring;
}

// ---------------------------------------------------------------------------
// Coefficient

Coefficient::Coefficient(RingPtr ring, TermMap terms) : ring_(std::move(ring)) {
    if (!ring_) throw config_error("coefficient without a ring");
    terms_ = ring_->reduce(std::move(terms));
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] < 0 && !ring_->symbol_invertible(static_cast<int>(i)))
                throw config_error("negative exponent of non-invertible symbol " +
                                   ring_->name(static_cast<int>(i)));
}

Coefficient Coefficient::from_number(RingPtr ring, GaussianRational v) {
    TermMap t;
    if (!v.is_zero()) t.emplace(ExpVec(ring->size(), 0), std::move(v));
    return Coefficient(std::move(ring), std::move(t));
}

Coefficient Coefficient::symbol(RingPtr ring, const std::string& name, int exp) {
    int id = ring->require_id(name);
    ExpVec e(ring->size(), 0);
    e[static_cast<std::size_t>(id)] = exp;
    TermMap t;
    t.emplace(std::move(e), GaussianRational(1));
    return Coefficient(std::move(ring), std::move(t));
}

Coefficient Coefficient::monomial(RingPtr ring, GaussianRational c,
                                  const std::map<std::string, int>& exps) {
    ExpVec e(ring->size(), 0);
    for (const auto& [name, exp] : exps) e[static_cast<std::size_t>(ring->require_id(name))] = exp;
    TermMap t;
    if (!c.is_zero()) t.emplace(std::move(e), std::move(c));
    return Coefficient(std::move(ring), std::move(t));
}

bool Coefficient::is_one() const {
    auto v = as_number();
    return v && *v == GaussianRational(1);
}

std::optional<GaussianRational> Coefficient::as_number() const {
    if (terms_.empty()) return GaussianRational(0);
    if (terms_.size() != 1) return std::nullopt;
    const auto& [e, c] = *terms_.begin();
    for (int x : e)
        if (x != 0) return std::nullopt;
    return c;
}

bool Coefficient::is_invertible_monomial() const {
    if (terms_.size() != 1) return false;
    const auto& [e, c] = *terms_.begin();
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] != 0 && !ring_->symbol_invertible(static_cast<int>(i))) return false;
    return true;
}

Coefficient Coefficient::inverse() const {
    if (!is_invertible_monomial())
        throw config_error("not an invertible monomial: " + to_string());
    const auto& [e, c] = *terms_.begin();
    ExpVec inv_e(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) inv_e[i] = -e[i];
    TermMap t;
    t.emplace(std::move(inv_e), c.inverse());
    return Coefficient(ring_, std::move(t));
}

bool Coefficient::is_cancellable() const {
    if (is_zero()) return false;
    for (int sym : support()) {
        const ConstraintRule* r = ring_->rule_for(sym);
        if (!r || r->domain_like) continue;
        if (r->roots.empty()) return false; // unknown factorization: stay conservative
        for (const auto& root : r->roots) {
            Coefficient image = substitute(ring_->name(sym), Coefficient(ring_, TermMap(root)));
            if (!image.is_cancellable()) return false;
        }
        return true; // every root image was cancellable
    }
    return true;
}

Coefficient Coefficient::operator-() const {
    TermMap t;
    for (const auto& [e, c] : terms_) t.emplace(e, -c);
    Coefficient out;
    out.ring_ = ring_;
    out.terms_ = std::move(t);
    return out;
}

void Coefficient::check_ring(const Coefficient& o) const {
    if (!ring_ || !o.ring_) throw config_error("operation on uninitialized coefficient");
    if (ring_ != o.ring_ && !ring_->same_structure(*o.ring_))
        throw config_error("coefficients over mismatched rings/constraint sets");
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
    check_ring(o);
    TermMap t = terms_;
    for (const auto& [e, c] : o.terms_) accumulate(t, e, c);
    Coefficient out;
    out.ring_ = ring_;
    out.terms_ = std::move(t);
    return out;
}

Coefficient Coefficient::operator-(const Coefficient& o) const { return *this + (-o); }

Coefficient Coefficient::operator*(const Coefficient& o) const {
    check_ring(o);
    TermMap t;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) accumulate(t, add_exps(e1, e2), c1 * c2);
    return Coefficient(ring_, std::move(t));
}

Coefficient Coefficient::operator*(const GaussianRational& g) const {
    if (g.is_zero()) return Coefficient(ring_);
    TermMap t;
    for (const auto& [e, c] : terms_) t.emplace(e, c * g);
    Coefficient out;
    out.ring_ = ring_;
    out.terms_ = std::move(t);
    return out;
}

bool Coefficient::operator==(const Coefficient& o) const {
    check_ring(o);
    return terms_ == o.terms_;
}

Coefficient Coefficient::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    Coefficient acc = Coefficient::one(ring_);
    Coefficient base = *this;
    unsigned k = static_cast<unsigned>(e);
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Coefficient Coefficient::substitute(const std::string& name, const Coefficient& replacement) const {
    check_ring(replacement);
    int id = ring_->require_id(name);
    Coefficient out = Coefficient::zero(ring_);
    for (const auto& [e, c] : terms_) {
        int exp = e[static_cast<std::size_t>(id)];
        ExpVec rest = e;
        rest[static_cast<std::size_t>(id)] = 0;
        TermMap base;
        base.emplace(std::move(rest), c);
        Coefficient term(ring_, std::move(base));
        if (exp != 0) term *= replacement.pow(exp);
        out += term;
    }
    return out;
}

GaussianRational Coefficient::specialize(
    const std::map<std::string, GaussianRational>& assignment) const {
    check_assignment(ring_, assignment);
    GaussianRational total(0);
    for (const auto& [e, c] : terms_) {
        GaussianRational v = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            const GaussianRational& x = assignment.at(ring_->name(static_cast<int>(i)));
            if (x.is_zero() && e[i] < 0)
                throw config_error("specialization assigns zero to inverted symbol " +
                                   ring_->name(static_cast<int>(i)));
            v *= x.pow(e[i]);
        }
        total += v;
    }
    return total;
}

Coefficient Coefficient::to_ring(const RingPtr& target) const {
    std::vector<int> remap(ring_->size(), -1);
    for (std::size_t i = 0; i < ring_->size(); ++i)
        remap[i] = target->id(ring_->name(static_cast<int>(i)));
    TermMap t;
    for (const auto& [e, c] : terms_) {
        ExpVec e2(target->size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (remap[i] < 0)
                throw config_error("symbol " + ring_->name(static_cast<int>(i)) +
                                   " is absent from the target ring");
            e2[static_cast<std::size_t>(remap[i])] += e[i];
        }
        accumulate(t, e2, c);
    }
    return Coefficient(target, std::move(t));
}

std::vector<int> Coefficient::support() const {
    std::vector<bool> seen(ring_->size(), false);
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) seen[i] = true;
    std::vector<int> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) out.push_back(static_cast<int>(i));
    return out;
}

namespace {

// Canonical monomial order for rendering: walk symbols in name order, the
// higher exponent first.
bool render_before(const SymRing& ring, const ExpVec& a, const ExpVec& b) {
    for (int id : ring.name_order()) {
        int ea = a[static_cast<std::size_t>(id)];
        int eb = b[static_cast<std::size_t>(id)];
        if (ea != eb) return ea > eb;
    }
    return false;
}

std::string render_monomial(const SymRing& ring, const ExpVec& e) {
    std::string s;
    for (int id : ring.name_order()) {
        int exp = e[static_cast<std::size_t>(id)];
        if (exp == 0) continue;
        if (!s.empty()) s += "*";
        s += ring.name(id);
        if (exp != 1) s += "^" + std::to_string(exp);
    }
    return s;
}

// Renders one term as (negative?, body-without-sign).
std::pair<bool, std::string> render_term(const SymRing& ring, const ExpVec& e,
                                         const GaussianRational& c) {
    std::string mono = render_monomial(ring, e);
    bool neg = false;
    std::string num;
    if (c.is_real()) {
        neg = c.re() < 0;
        Rational a = neg ? Rational(-c.re()) : c.re();
        num = rational_to_string(a);
        if (a == 1 && !mono.empty()) num.clear();
    } else if (c.re() == 0) {
        neg = c.im() < 0;
        Rational a = neg ? Rational(-c.im()) : c.im();
        num = (a == 1) ? "I" : rational_to_string(a) + "*I";
    } else {
        num = "(" + c.to_string() + ")";
    }
    std::string body;
    if (mono.empty())
        body = num.empty() ? "1" : num;
    else if (num.empty())
        body = mono;
    else
        body = num + "*" + mono;
    return {neg, body};
}

std::string render_terms(const SymRing& ring, const TermMap& terms) {
    if (terms.empty()) return "0";
    std::vector<const std::pair<const ExpVec, GaussianRational>*> order;
    order.reserve(terms.size());
    for (const auto& t : terms) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [&](auto* a, auto* b) { return render_before(ring, a->first, b->first); });
    std::string s;
    bool first = true;
    for (auto* t : order) {
        auto [neg, body] = render_term(ring, t->first, t->second);
        if (first) {
            s += (neg ? "-" : "") + body;
            first = false;
        } else {
            s += (neg ? " - " : " + ") + body;
        }
    }
    return s;
}

std::string render_constraint(const SymRing& ring, const ConstraintRule& rule) {
    ExpVec lhs(ring.size(), 0);
    lhs[static_cast<std::size_t>(rule.sym)] = rule.power;
    return render_monomial(ring, lhs) + " -> " + render_terms(ring, rule.rhs);
}

} // namespace

std::string Coefficient::to_string() const {
    if (!ring_) return "0";
    return render_terms(*ring_, terms_);
}

Coefficient q_integer(int k, const Coefficient& q_value) {
    if (k < 1) throw structural_error("q_integer requires k >= 1");
    Coefficient acc = Coefficient::one(q_value.ring());
    Coefficient power = Coefficient::one(q_value.ring());
    for (int j = 1; j < k; ++j) {
        power *= q_value;
        acc += power;
    }
    return acc;
}

void check_assignment(const RingPtr& ring,
                      const std::map<std::string, GaussianRational>& assignment) {
    for (const auto& s : ring->symbols())
        if (assignment.find(s.name) == assignment.end())
            throw config_error("unassigned symbol: " + s.name);
    for (const auto& rule : ring->constraints()) {
        const GaussianRational& v = assignment.at(ring->name(rule.sym));
        GaussianRational lhs = v.pow(rule.power);
        GaussianRational rhs(0);
        for (const auto& [e, c] : rule.rhs) {
            GaussianRational t = c;
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) t *= assignment.at(ring->name(static_cast<int>(i))).pow(e[i]);
            rhs += t;
        }
        if (lhs != rhs)
            throw config_error("assignment violates constraint: " + rule.text);
    }
}

// ---------------------------------------------------------------------------
// Exact division

namespace {

// Decompose by the exponent of one symbol: exponent -> coefficient slice.
std::map<int, Coefficient> slices_by(const Coefficient& a, int sym) {
    std::map<int, TermMap> raw;
    for (const auto& [e, c] : a.terms()) {
        ExpVec rest = e;
        int exp = rest[static_cast<std::size_t>(sym)];
        rest[static_cast<std::size_t>(sym)] = 0;
        raw[exp].emplace(std::move(rest), c);
    }
    std::map<int, Coefficient> out;
    for (auto& [exp, terms] : raw) out.emplace(exp, Coefficient(a.ring(), std::move(terms)));
    return out;
}

Coefficient monomial_from(const RingPtr& ring, int sym, int exp) {
    ExpVec e(ring->size(), 0);
    e[static_cast<std::size_t>(sym)] = exp;
    TermMap t;
    t.emplace(std::move(e), GaussianRational(1));
    return Coefficient(ring, std::move(t));
}

// Inverse of a univariate polynomial in a constrained symbol, modulo the
// symbol's modulus, over plain Gaussian-rational coefficients.
std::optional<Coefficient> invert_mod_constraint(const Coefficient& d, int sym) {
    const RingPtr& ring = d.ring();
    const ConstraintRule* rule = ring->rule_for(sym);
    if (!rule) return std::nullopt;
    using Poly = std::vector<GaussianRational>;
    auto trim = [](Poly& p) {
        while (!p.empty() && p.back().is_zero()) p.pop_back();
    };
    auto deg = [](const Poly& p) { return static_cast<int>(p.size()) - 1; };
    Poly m(static_cast<std::size_t>(rule->power) + 1);
    m[static_cast<std::size_t>(rule->power)] = GaussianRational(1);
    for (const auto& [e, c] : rule->rhs) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0 && static_cast<int>(i) != sym) return std::nullopt;
        m[static_cast<std::size_t>(e[static_cast<std::size_t>(sym)])] -= c;
    }
    Poly a(static_cast<std::size_t>(rule->power), GaussianRational(0));
    for (const auto& [e, c] : d.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0 && static_cast<int>(i) != sym) return std::nullopt;
        a[static_cast<std::size_t>(e[static_cast<std::size_t>(sym)])] = c;
    }
    trim(a);
    trim(m);
    if (a.empty()) return std::nullopt;
    // Extended Euclid over the field Q(i).
    Poly r0 = m, r1 = a;
    Poly t0, t1 = {GaussianRational(1)};
    auto poly_sub_scaled = [&](Poly& x, const Poly& y, const GaussianRational& c, int shift) {
        if (static_cast<int>(x.size()) < static_cast<int>(y.size()) + shift)
            x.resize(y.size() + static_cast<std::size_t>(shift));
        for (std::size_t i = 0; i < y.size(); ++i)
            x[i + static_cast<std::size_t>(shift)] -= y[i] * c;
        trim(x);
    };
    long guard = 0;
    while (!r1.empty() && deg(r1) > 0) {
        if (++guard > 1000) return std::nullopt;
        if (deg(r0) < deg(r1)) {
            std::swap(r0, r1);
            std::swap(t0, t1);
            continue;
        }
        // one division step
        Poly q;
        Poly rem = r0;
        while (!rem.empty() && deg(rem) >= deg(r1)) {
            int shift = deg(rem) - deg(r1);
            GaussianRational c = rem.back() / r1.back();
            if (static_cast<int>(q.size()) <= shift) q.resize(static_cast<std::size_t>(shift) + 1);
            q[static_cast<std::size_t>(shift)] += c;
            poly_sub_scaled(rem, r1, c, shift);
        }
        // (r0, r1) <- (r1, rem); (t0, t1) <- (t1, t0 - q t1)
        Poly tnew = t0;
        for (std::size_t i = 0; i < q.size(); ++i)
            if (!q[i].is_zero()) poly_sub_scaled(tnew, t1, q[i], static_cast<int>(i));
        r0 = std::move(r1);
        r1 = std::move(rem);
        t0 = std::move(t1);
        t1 = std::move(tnew);
    }
    if (r1.empty()) return std::nullopt; // gcd has positive degree: not invertible
    // r1 is a nonzero constant: a * t1 = r1 (mod m)  =>  inverse = t1 / r1.
    GaussianRational scale = r1[0].inverse();
    TermMap inv;
    for (std::size_t i = 0; i < t1.size(); ++i) {
        if (t1[i].is_zero()) continue;
        ExpVec e(ring->size(), 0);
        e[static_cast<std::size_t>(sym)] = static_cast<int>(i);
        inv.emplace(std::move(e), t1[i] * scale);
    }
    return Coefficient(ring, std::move(inv));
}

std::optional<Coefficient> divide_impl(const Coefficient& t, const Coefficient& d, int depth);

// When sym^k equals a unit monomial c * y^{ey} * M' (ey = +-1), the quotient
// ring is isomorphic to the Laurent ring with y eliminated and sym freed;
// divide there and map back.
std::optional<Coefficient> divide_via_elimination(const Coefficient& t, const Coefficient& d,
                                                  int y, int ey, const ConstraintRule& rule,
                                                  int depth) {
    const RingPtr& ring = t.ring();
    const std::size_t n = ring->size();
    std::vector<SymbolDecl> decls = ring->symbols();
    decls[static_cast<std::size_t>(rule.sym)].invertible = true;
    std::vector<TermMap> kept;
    for (const auto& other : ring->constraints()) {
        if (other.sym == rule.sym) continue;
        TermMap poly;
        ExpVec lead(n, 0);
        lead[static_cast<std::size_t>(other.sym)] = other.power;
        poly.emplace(std::move(lead), GaussianRational(1));
        for (const auto& [e, c] : other.rhs) accumulate(poly, e, -c);
        kept.push_back(std::move(poly));
    }
    RingPtr elim = SymRing::make(decls, kept);

    const auto& [re, rcoef] = *rule.rhs.begin();
    auto forward = [&](const Coefficient& a) {
        TermMap out;
        for (const auto& [e, c] : a.terms()) {
            int m = e[static_cast<std::size_t>(y)];
            ExpVec ne = e;
            ne[static_cast<std::size_t>(y)] = 0;
            GaussianRational nc = c;
            if (m != 0) {
                nc *= rcoef.pow(static_cast<long>(-ey) * m);
                for (std::size_t i = 0; i < n; ++i) {
                    if (static_cast<int>(i) == y || static_cast<int>(i) == rule.sym) continue;
                    ne[i] += -ey * m * re[i];
                }
                ne[static_cast<std::size_t>(rule.sym)] += rule.power * ey * m;
            }
            accumulate(out, ne, nc);
        }
        return Coefficient(elim, std::move(out));
    };
    auto backward = [&](const Coefficient& a) {
        TermMap out;
        for (const auto& [e, c] : a.terms()) {
            int E = e[static_cast<std::size_t>(rule.sym)];
            int tq = E >= 0 ? E / rule.power : -(((-E) + rule.power - 1) / rule.power);
            int b = E - rule.power * tq;
            ExpVec ne = e;
            ne[static_cast<std::size_t>(rule.sym)] = b;
            GaussianRational nc = c * rcoef.pow(tq);
            for (std::size_t i = 0; i < n; ++i)
                if (static_cast<int>(i) != rule.sym) ne[i] += tq * re[i];
            accumulate(out, ne, nc);
        }
        return Coefficient(ring, std::move(out));
    };
    auto q = divide_impl(forward(t), forward(d), depth + 1);
    if (!q) return std::nullopt;
    return backward(*q);
}

std::optional<Coefficient> divide_impl(const Coefficient& t, const Coefficient& d, int depth) {
    const RingPtr& ring = t.ring();
    if (depth > 16) return std::nullopt;
    if (d.is_zero()) return std::nullopt;
    if (t.is_zero()) return Coefficient::zero(ring);
    if (d.is_invertible_monomial()) return t * d.inverse();

    // Strip the monomial content of d.
    ExpVec content(ring->size(), 0);
    bool first = true;
    for (const auto& [e, c] : d.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i)
            content[i] = first ? e[i] : std::min(content[i], e[i]);
        first = false;
    }
    for (std::size_t i = 0; i < content.size(); ++i)
        if (!ring->symbol_invertible(static_cast<int>(i)) && content[i] < 0) content[i] = 0;
    bool has_content = false;
    for (int x : content)
        if (x != 0) has_content = true;
    Coefficient d2 = d;
    Coefficient t2 = t;
    if (has_content) {
        TermMap mono;
        mono.emplace(content, GaussianRational(1));
        Coefficient m(ring, std::move(mono));
        if (!m.is_invertible_monomial()) return std::nullopt;
        Coefficient minv = m.inverse();
        d2 = d * minv;
        t2 = t * minv;
    }
    auto num = d2.as_number();
    if (num) return t2 * num->inverse();

    std::vector<int> sup = d2.support();

    // Constrained symbols in the divisor: go through the structure of their
    // modulus first.
    for (int s : sup) {
        const ConstraintRule* rule = ring->rule_for(s);
        if (!rule) continue;
        const std::string& sname = ring->name(s);
        if (rule->power == 2 && rule->roots.size() == 2) {
            // Split modulus: divide both root images and recombine with the
            // idempotents of the splitting.
            Coefficient rho1(ring, TermMap(rule->roots[0]));
            Coefficient rho2(ring, TermMap(rule->roots[1]));
            Coefficient den = rho1 - rho2;
            if (!den.is_invertible_monomial()) continue;
            auto c1 = divide_impl(t2.substitute(sname, rho1), d2.substitute(sname, rho1),
                                  depth + 1);
            if (!c1) continue;
            auto c2 = divide_impl(t2.substitute(sname, rho2), d2.substitute(sname, rho2),
                                  depth + 1);
            if (!c2) continue;
            Coefficient X = Coefficient::symbol(ring, sname);
            Coefficient q = (*c1 * (X - rho2) - *c2 * (X - rho1)) * den.inverse();
            if (q * d == t) return q;
            continue;
        }
        if (rule->rhs.size() == 1 && rule->inv) {
            // sym^k equals a unit monomial: eliminate one of its symbols to
            // land in a plain Laurent ring, divide there, and map back.
            const auto& [re, rc] = *rule->rhs.begin();
            if (re[static_cast<std::size_t>(s)] != 0) continue;
            int y = -1, ey = 0;
            bool clean = true;
            for (std::size_t i = 0; i < re.size(); ++i) {
                if (re[i] == 0 || static_cast<int>(i) == s) continue;
                if (ring->rule_for(static_cast<int>(i)) ||
                    !ring->symbols()[i].invertible) {
                    clean = false;
                    continue;
                }
                if (y < 0 && (re[i] == 1 || re[i] == -1)) {
                    y = static_cast<int>(i);
                    ey = re[i];
                }
            }
            if (!clean || y < 0) continue;
            bool y_free_elsewhere = true;
            for (const auto& other : ring->constraints()) {
                if (other.sym == s) continue;
                for (const auto& [oe, oc] : other.rhs)
                    if (oe[static_cast<std::size_t>(y)] != 0) y_free_elsewhere = false;
            }
            if (!y_free_elsewhere) continue;
            auto q = divide_via_elimination(t2, d2, y, ey, *rule, depth);
            if (q && *q * d == t) return q;
            continue;
        }
        if (sup.size() == 1 && sup[0] == s) {
            auto inv = invert_mod_constraint(d2, s);
            if (!inv) continue;
            Coefficient q = t2 * *inv;
            if (q * d == t) return q;
        }
    }

    // Pick an unconstrained pivot symbol.
    int pivot = -1;
    for (int s : sup)
        if (!ring->rule_for(s)) pivot = s;
    if (pivot < 0) return std::nullopt;

    auto dsl = slices_by(d2, pivot);
    int ddeg = dsl.rbegin()->first;
    int dmin = dsl.begin()->first;
    const Coefficient& dlead = dsl.rbegin()->second;
    Coefficient rem = t2;
    Coefficient q = Coefficient::zero(ring);
    int floor_guard = 0;
    {
        auto tsl = slices_by(t2, pivot);
        floor_guard = (tsl.empty() ? 0 : tsl.begin()->first) - (ddeg - dmin) - 4;
    }
    long guard = 0;
    while (!rem.is_zero()) {
        if (++guard > 4000) return std::nullopt;
        auto rsl = slices_by(rem, pivot);
        int rdeg = rsl.rbegin()->first;
        if (rdeg < floor_guard) return std::nullopt;
        auto c = divide_impl(rsl.rbegin()->second, dlead, depth + 1);
        if (!c) return std::nullopt;
        if (rdeg - ddeg < 0 && !ring->symbol_invertible(pivot)) return std::nullopt;
        Coefficient qt = *c * monomial_from(ring, pivot, rdeg - ddeg);
        q += qt;
        rem -= qt * d2;
        auto rsl2 = slices_by(rem, pivot);
        if (!rem.is_zero() && rsl2.rbegin()->first >= rdeg) return std::nullopt;
    }
    if (q * d == t) return q;
    return std::nullopt;
}

} // namespace

std::optional<Coefficient> try_divide_exact(const Coefficient& t, const Coefficient& d) {
    return divide_impl(t, d, 0);
}

} // namespace derham
