#include <doctest.h>

#include <algorithm>
#include <random>

#include "derham/symring.hpp"

using namespace derham;

namespace {

RingPtr qr_ring() { return SymRing::make({{"q", true}, {"r", true}}); }

RingPtr cubic_ring() {
    // Q^2 + Q + 1 = 0, i.e. Q a primitive cubic root of unity.
    auto base = SymRing::make({{"q", true}, {"r", true}, {"Q", true}});
    TermMap poly;
    poly.emplace(ExpVec{0, 0, 2}, GaussianRational(1));
    poly.emplace(ExpVec{0, 0, 1}, GaussianRational(1));
    poly.emplace(ExpVec{0, 0, 0}, GaussianRational(1));
    return SymRing::make({{"q", true}, {"r", true}, {"Q", true}}, {poly});
}

RingPtr imaginary_ring() {
    TermMap poly;
    poly.emplace(ExpVec{0, 0, 2}, GaussianRational(1));
    poly.emplace(ExpVec{0, 0, 0}, GaussianRational(1));
    return SymRing::make({{"q", true}, {"r", true}, {"Q", true}}, {poly});
}

RingPtr sqrt_ring() {
    // s^2 = r, so Q = 1/s plays the role of 1/sqrt(r).
    TermMap poly;
    poly.emplace(ExpVec{0, 0, 2}, GaussianRational(1));
    poly.emplace(ExpVec{0, 1, 0}, GaussianRational(-1));
    return SymRing::make({{"q", true}, {"r", true}, {"s", true}}, {poly});
}

GaussianRational random_rational(std::mt19937& rng, bool nonzero) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    int n = num(rng);
    while (nonzero && n == 0) n = num(rng);
    return GaussianRational(Rational(n, den(rng)));
}

Coefficient random_coeff(const RingPtr& ring, std::mt19937& rng, int terms = 3) {
    std::uniform_int_distribution<int> exp(-2, 2);
    Coefficient out = Coefficient::zero(ring);
    for (int t = 0; t < terms; ++t) {
        std::map<std::string, int> exps;
        for (const auto& s : ring->symbols())
            if (!ring->rule_for(ring->id(s.name))) exps[s.name] = exp(rng);
        out += Coefficient::monomial(ring, random_rational(rng, false), exps);
    }
    return out;
}

// Independent reducer applying constraint rules in random order.
TermMap random_order_reduce(const RingPtr& ring, TermMap in, std::mt19937& rng) {
    std::vector<std::pair<ExpVec, GaussianRational>> work(in.begin(), in.end());
    TermMap out;
    while (!work.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, work.size() - 1);
        std::size_t at = pick(rng);
        std::swap(work[at], work.back());
        auto [e, c] = work.back();
        work.pop_back();
        if (c.is_zero()) continue;
        std::vector<const ConstraintRule*> applicable;
        for (const auto& rule : ring->constraints()) {
            int exp = e[static_cast<std::size_t>(rule.sym)];
            if (exp >= rule.power || exp < 0) applicable.push_back(&rule);
        }
        if (applicable.empty()) {
            auto it = out.find(e);
            if (it == out.end())
                out.emplace(e, c);
            else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
            continue;
        }
        std::uniform_int_distribution<std::size_t> rpick(0, applicable.size() - 1);
        const ConstraintRule* rule = applicable[rpick(rng)];
        int exp = e[static_cast<std::size_t>(rule->sym)];
        const TermMap& repl = exp < 0 ? *rule->inv : rule->rhs;
        ExpVec base = e;
        base[static_cast<std::size_t>(rule->sym)] += exp < 0 ? 1 : -rule->power;
        for (const auto& [m, mc] : repl) {
            ExpVec ne = base;
            for (std::size_t i = 0; i < ne.size(); ++i) ne[i] += m[i];
            work.emplace_back(std::move(ne), c * mc);
        }
    }
    return out;
}

} // namespace

TEST_CASE("inverse pair cancels") {
    auto ring = qr_ring();
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient qinv = Coefficient::symbol(ring, "q", -1);
    CHECK(q * qinv == Coefficient::one(ring));
}

TEST_CASE("expand and collect: (q - 1/q) q + 1 = q^2") {
    auto ring = qr_ring();
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient expr = (q - q.inverse()) * q + Coefficient::one(ring);
    CHECK(expr == q * q);
    // frozen oracle value at q = 2: (2 - 1/2)*2 + 1 = 4
    std::map<std::string, GaussianRational> at{{"q", GaussianRational(2)},
                                               {"r", GaussianRational(1)}};
    CHECK(expr.specialize(at) == GaussianRational(4));
}

TEST_CASE("cubic root constraint: Q * Q^2 = 1") {
    auto ring = cubic_ring();
    Coefficient Q = Coefficient::symbol(ring, "Q");
    CHECK(Q * Q * Q == Coefficient::one(ring));
    CHECK(Q.pow(3).is_one());
    // Q^{-1} must also reduce: Q^{-1} = -Q - 1
    Coefficient expected = -Q - Coefficient::one(ring);
    CHECK(Q.inverse() == expected);
}

TEST_CASE("q_integer basics") {
    auto ring = cubic_ring();
    auto plain = qr_ring();
    Coefficient qsym = Coefficient::symbol(plain, "q");
    CHECK(q_integer(1, qsym) == Coefficient::one(plain));

    auto qQ = SymRing::make({{"Q", true}});
    Coefficient Q = Coefficient::symbol(qQ, "Q");
    Coefficient expected = Coefficient::one(qQ) + Q + Q * Q;
    CHECK(q_integer(3, Q) == expected);

    Coefficient Qc = Coefficient::symbol(ring, "Q");
    CHECK(q_integer(3, Qc).is_zero());
}

TEST_CASE("q_integer(k,Q)*(Q-1) = Q^k - 1 for k <= 6") {
    auto ring = SymRing::make({{"Q", true}});
    Coefficient Q = Coefficient::symbol(ring, "Q");
    Coefficient one = Coefficient::one(ring);
    for (int k = 1; k <= 6; ++k)
        CHECK(q_integer(k, Q) * (Q - one) == Q.pow(k) - one);
}

TEST_CASE("specialize evaluates exactly") {
    auto ring = qr_ring();
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient a = q - q.inverse();
    std::map<std::string, GaussianRational> at{{"q", GaussianRational(2)},
                                               {"r", GaussianRational(1)}};
    CHECK(a.specialize(at) == GaussianRational(Rational(3, 2)));

    auto iring = SymRing::make({{"Q", true}});
    Coefficient Q = Coefficient::symbol(iring, "Q");
    std::map<std::string, GaussianRational> ati{{"Q", GaussianRational::i()}};
    CHECK(q_integer(3, Q).specialize(ati) == GaussianRational::i());
}

TEST_CASE("specialize on the 1/sqrt(r) branch") {
    auto ring = sqrt_ring();
    Coefficient Q = Coefficient::symbol(ring, "s").inverse();
    Coefficient r = Coefficient::symbol(ring, "r");
    Coefficient a = Q * Q * r - Coefficient::one(ring);
    CHECK(a.is_zero()); // already zero symbolically: s^-2 r = 1
    std::map<std::string, GaussianRational> at{{"q", GaussianRational(3)},
                                               {"r", GaussianRational(4)},
                                               {"s", GaussianRational(2)}};
    CHECK(a.specialize(at) == GaussianRational(0));
}

TEST_CASE("specialize error paths") {
    auto ring = sqrt_ring();
    Coefficient r = Coefficient::symbol(ring, "r");
    std::map<std::string, GaussianRational> missing{{"q", GaussianRational(1)},
                                                    {"r", GaussianRational(4)}};
    CHECK_THROWS_AS(r.specialize(missing), config_error);
    std::map<std::string, GaussianRational> bad{{"q", GaussianRational(1)},
                                                {"r", GaussianRational(5)},
                                                {"s", GaussianRational(2)}};
    CHECK_THROWS_WITH_AS(r.specialize(bad),
                         doctest::Contains("violates constraint: s^2 -> r"), config_error);
}

TEST_CASE("mismatched rings are rejected") {
    auto a = qr_ring();
    auto b = sqrt_ring();
    Coefficient qa = Coefficient::symbol(a, "q");
    Coefficient qb = Coefficient::symbol(b, "q");
    CHECK_THROWS_AS((void)(qa + qb), config_error);
}

TEST_CASE("ring laws hold symbolically and at random specializations") {
    std::mt19937 rng(12345);
    auto ring = sqrt_ring();
    for (int trial = 0; trial < 20; ++trial) {
        Coefficient a = random_coeff(ring, rng);
        Coefficient b = random_coeff(ring, rng);
        Coefficient c = random_coeff(ring, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);

        GaussianRational sv = random_rational(rng, true);
        std::map<std::string, GaussianRational> at{
            {"q", random_rational(rng, true)}, {"s", sv}, {"r", sv * sv}};
        CHECK((a * b).specialize(at) == a.specialize(at) * b.specialize(at));
        CHECK((a + b).specialize(at) == a.specialize(at) + b.specialize(at));
    }
}

TEST_CASE("normal form is independent of rule application order") {
    std::mt19937 rng(98765);
    auto ring = sqrt_ring();
    auto cubic = cubic_ring();
    for (int trial = 0; trial < 25; ++trial) {
        for (const auto& r : {ring, cubic}) {
            std::uniform_int_distribution<int> exp(-3, 5);
            TermMap raw;
            for (int t = 0; t < 4; ++t) {
                ExpVec e(r->size(), 0);
                for (std::size_t i = 0; i < r->size(); ++i) e[i] = exp(rng);
                GaussianRational c = random_rational(rng, false);
                auto it = raw.find(e);
                if (it == raw.end())
                    raw.emplace(e, c);
                else
                    it->second += c;
            }
            Coefficient canonical(r, TermMap(raw));
            TermMap shuffled = random_order_reduce(r, TermMap(raw), rng);
            CHECK(canonical.terms() == shuffled);
        }
    }
}

TEST_CASE("exact division") {
    auto ring = sqrt_ring();
    Coefficient s = Coefficient::symbol(ring, "s");
    Coefficient q = Coefficient::symbol(ring, "q");
    Coefficient r = Coefficient::symbol(ring, "r");
    Coefficient one = Coefficient::one(ring);

    Coefficient f = s + one + s.inverse(); // s^-1 (s^2 + s + 1)
    Coefficient target = f * (r - one) * q.inverse();
    auto quot = try_divide_exact(target, f);
    REQUIRE(quot);
    CHECK(*quot == (r - one) * q.inverse());
    CHECK(!try_divide_exact(q + one, f));

    auto cubic = cubic_ring();
    Coefficient Q = Coefficient::symbol(cubic, "Q");
    Coefficient rc = Coefficient::symbol(cubic, "r");
    Coefficient d = (Coefficient::one(cubic) + Q) * (Coefficient::one(cubic) + rc);
    Coefficient t = rc + Coefficient::one(cubic);
    auto quot2 = try_divide_exact(t, d);
    REQUIRE(quot2);
    CHECK(*quot2 * d == t);
    CHECK(*quot2 == -Q); // (1+Q)^{-1} = -Q under Q^2+Q+1 = 0
}

TEST_CASE("zero-divisor awareness") {
    auto ring = imaginary_ring();
    Coefficient Q = Coefficient::symbol(ring, "Q");
    Coefficient r = Coefficient::symbol(ring, "r");
    Coefficient one = Coefficient::one(ring);
    CHECK((r + one).is_cancellable());
    // Q - I annihilates Q + I in this ring: not cancellable.
    Coefficient qmi = Q - Coefficient::from_number(ring, GaussianRational::i());
    CHECK(!qmi.is_cancellable());
    Coefficient qpi = Q + Coefficient::from_number(ring, GaussianRational::i());
    CHECK((qmi * qpi).is_zero());

    auto dom = sqrt_ring();
    Coefficient s = Coefficient::symbol(dom, "s");
    CHECK((s + Coefficient::one(dom) + s.inverse()).is_cancellable());
}

TEST_CASE("rendering is canonical") {
    auto ring = qr_ring();
    Coefficient q = Coefficient::symbol(ring, "q");
    CHECK((q - q.inverse()).to_string() == "q - q^-1");
    Coefficient rq = Coefficient::symbol(ring, "r") * q.inverse();
    CHECK(rq.to_string() == "q^-1*r");
    CHECK(Coefficient::zero(ring).to_string() == "0");
    auto iring = SymRing::make({{"Q", true}});
    Coefficient Q = Coefficient::symbol(iring, "Q");
    Coefficient mix = Q * GaussianRational::i() + Coefficient::one(iring);
    CHECK(mix.to_string() == "I*Q + 1");
}

TEST_CASE("gaussian sqrt") {
    CHECK(*GaussianRational(Rational(9, 4)).sqrt() == GaussianRational(Rational(3, 2)));
    CHECK(*GaussianRational(-1).sqrt() == GaussianRational::i());
    CHECK(!GaussianRational(-3).sqrt());
    GaussianRational z(Rational(0), Rational(2)); // 2i = (1+i)^2
    auto s = z.sqrt();
    REQUIRE(s);
    CHECK(*s * *s == z);
}
