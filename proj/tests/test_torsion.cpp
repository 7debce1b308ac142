#include <catch_amalgamated.hpp>

#include <qtorsion/pearl_models.hpp>

using namespace qtorsion;

namespace {

const RationalField QQ;

template <class F>
Matrix<typename F::value_type> mat(const F& f, std::initializer_list<std::initializer_list<long long>> rows)
{
    return to_field(f, int_matrix(rows));
}

} // namespace

TEST_CASE("milnor torsion examples")
{
    BasedChainComplex<Rational> c{{1, 1}, {mat(QQ, {{3}})}, Rational(0)};
    CHECK(milnor_torsion(QQ, c, empty_homology(QQ, c.ranks)).value() == 3);

    BasedChainComplex<Rational> z{{2, 1, 2}, {zeros(QQ, 2, 1), zeros(QQ, 1, 2)}, Rational(0)};
    std::vector<Matrix<Rational>> h{identity(QQ, 2), identity(QQ, 1), identity(QQ, 2)};
    CHECK(milnor_torsion(QQ, z, h).value() == 1);

    // Rescaling one homology vector in an even degree multiplies τ by λ, in an odd degree by 1/λ.
    auto h2 = h;
    h2[0](0, 0) = 5;
    CHECK(milnor_torsion(QQ, z, h2).value() == 5);
    h2 = h;
    h2[1](0, 0) = 5;
    CHECK(milnor_torsion(QQ, z, h2).value() == Rational(1, 5));

    CHECK_THROWS_AS(milnor_torsion(QQ, z, empty_homology(QQ, z.ranks)), InputError);
    h2 = h;
    h2[0](0, 0) = 0;
    CHECK_THROWS_AS(milnor_torsion(QQ, z, h2), InputError);
}

TEMPLATE_TEST_CASE("milnor torsion is independent of internal choices", "", RationalField, PrimeField)
{
    const TestType field = [] {
        if constexpr (std::is_same_v<TestType, PrimeField>)
            return PrimeField(5);
        else
            return RationalField{};
    }();
    Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_acyclic_complex(field, rng.uniform(1, 4), 6, rng);
        const auto h = empty_homology(field, c.ranks);
        const auto tau = milnor_torsion(field, c, h);
        Rng choice = rng.split(static_cast<std::uint64_t>(trial));
        for (int rep = 0; rep < 3; ++rep)
            REQUIRE(milnor_torsion(field, c, h, TorsionChoices{&choice}) == tau);
    }
}

TEST_CASE("basis change law")
{
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::size_t> deg(rng.uniform(1, 4) + 1, 0), rho(deg.size() - 1, 0);
        for (auto& x : deg)
            x = rng.uniform(0, 2);
        for (auto& x : rho)
            x = rng.uniform(0, 2);
        const auto ch = random_split_complex(QQ, rho, deg, rng);
        std::vector<Matrix<Rational>> p, r;
        for (std::size_t k = 0; k < deg.size(); ++k) {
            p.push_back(detail::random_invertible(QQ, ch.complex.ranks[k], rng));
            r.push_back(detail::random_invertible(QQ, deg[k], rng));
        }
        const auto res = torsion_basis_change(QQ, ch.complex, ch.homology, p, r);
        REQUIRE(res.agree);
        REQUIRE(res.direct == res.predicted);
    }

    BasedChainComplex<Rational> c{{1, 1}, {mat(QQ, {{3}})}, Rational(0)};
    const auto h = empty_homology(QQ, c.ranks);
    std::vector<Matrix<Rational>> none{zeros(QQ, 0, 0), zeros(QQ, 0, 0)};
    auto same = torsion_basis_change(QQ, c, h, {identity(QQ, 1), identity(QQ, 1)}, none);
    CHECK(same.direct == 3);
    auto scaled = torsion_basis_change(QQ, c, h, {mat(QQ, {{2}}), identity(QQ, 1)}, none);
    CHECK(scaled.direct == Rational(3, 2));
    CHECK(scaled.agree);
    auto flipped = torsion_basis_change(QQ, c, h, {mat(QQ, {{-1}}), identity(QQ, 1)}, none);
    CHECK(SignClass(flipped.direct) == SignClass(Rational(3)));
    CHECK_THROWS_AS(torsion_basis_change(QQ, c, h, {zeros(QQ, 1, 1), identity(QQ, 1)}, none), InputError);
}

TEST_CASE("periodic torsion")
{
    PeriodicComplex<Rational> a{1, 1, mat(QQ, {{7}}), zeros(QQ, 1, 1)};
    CHECK(periodic_torsion(QQ, a).value() == 7);

    auto u = mat(QQ, {{2, 1}, {1, 3}});
    PeriodicComplex<Rational> b{2, 2, u, zeros(QQ, 2, 2)};
    CHECK(periodic_torsion(QQ, b) == SignClass(Rational(5)));

    PeriodicComplex<Rational> z{1, 1, zeros(QQ, 1, 1), zeros(QQ, 1, 1)};
    CHECK_THROWS_AS(periodic_torsion(QQ, z), NotNarrowError);
    try {
        periodic_torsion(QQ, z);
    } catch (const NotNarrowError& e) {
        CHECK(std::string(e.what()) == kNotNarrow);
    }

    // Random choices and simultaneous unimodular changes leave τ_2 unchanged.
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = rng.uniform(1, 4), r0 = rng.uniform(0, n);
        // d_oe has rank r0 and d_eo rank n - r0, with d_oe d_eo = d_eo d_oe = 0.
        auto oe = zeros(QQ, n, n), eo = zeros(QQ, n, n);
        for (std::size_t i = 0; i < r0; ++i)
            oe(i, i) = rng.uniform(1, 4);
        for (std::size_t i = r0; i < n; ++i)
            eo(i, i) = rng.uniform(1, 4);
        const auto pe = detail::random_invertible(QQ, n, rng), po = detail::random_invertible(QQ, n, rng);
        const auto pei = *inverse(QQ, pe), poi = *inverse(QQ, po);
        PeriodicComplex<Rational> c{n, n, pei * oe * po, poi * eo * pe};
        const auto tau = periodic_torsion_value(QQ, c);
        Rng choice = rng.split("choice");
        REQUIRE(periodic_torsion(QQ, c, TorsionChoices{&choice}) == SignClass(tau));
        // General change: τ_2 scales by det P_even / det P_odd.
        PeriodicComplex<Rational> plain{n, n, oe, eo};
        REQUIRE(SignClass(periodic_torsion_value(QQ, plain)) ==
                SignClass(tau * determinant(QQ, pe) / determinant(QQ, po)));
        auto [ue, uei] = random_unimodular(n, rng);
        auto [uo, uoi] = random_unimodular(n, rng);
        PeriodicComplex<Rational> c2{n, n, to_field(QQ, uei) * c.d_oe * to_field(QQ, uo),
                                     to_field(QQ, uoi) * c.d_eo * to_field(QQ, ue)};
        REQUIRE(periodic_torsion(QQ, c2) == SignClass(tau));
    }
}

TEST_CASE("quantum torsion of perfect pearl complexes")
{
    Rng rng(8);
    auto p = pearl_from_morse(QQ, realize_morse({2, {}}, {0, 0, 0, 0}, rng));
    CHECK_THROWS_AS(quantum_torsion(QQ, p), NotNarrowError);
    p.d1[1] = mat(QQ, {{0, -1}, {1, 0}});
    p.d2 = mat(QQ, {{1}});
    CHECK(quantum_torsion(QQ, p).value() == 1);
    p.d2 = mat(QQ, {{2}});
    CHECK(quantum_torsion(QQ, p) == SignClass(Rational(1, 2)));
    p.d1[1] = mat(QQ, {{3, 1}, {1, 2}});
    p.d2 = mat(QQ, {{4}});
    CHECK(quantum_torsion(QQ, p) == SignClass(Rational(5, 4)));
}

TEST_CASE("torsion equals torsion on integral Morse complexes")
{
    Rng rng(77);
    IntegerComplex lens{{1, 2, 2, 1},
                        {int_matrix(1, 2), int_matrix({{0, 0}, {0, 5}}), int_matrix(2, 1)},
                        BigInt(0)};
    const PrimeField f7(7);
    auto id = morse_torsion_identity(f7, lens, FieldSpec::prime(7));
    CHECK(id.agree);
    CHECK(id.milnor == SignClass(Fp{3, 7}));
    CHECK(id.milnor == SignClass(Fp{4, 7}));
    CHECK_THROWS_AS(morse_torsion_identity(PrimeField(5), lens, FieldSpec::prime(5)), InadmissibleCharacteristic);

    auto iq = morse_torsion_identity(QQ, realize_morse({0, {BigInt(3)}}, {0, 0, 0, 0}, rng), FieldSpec::rationals());
    CHECK(iq.agree);
    CHECK(iq.milnor.value() == Rational(1, 3));

    auto free = morse_torsion_identity(QQ, realize_morse({3, {}}, {1, 2, 2, 1}, rng), FieldSpec::rationals());
    CHECK(free.agree);
    CHECK(free.milnor.value() == 1);
}
