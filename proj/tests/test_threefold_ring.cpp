#include <catch_amalgamated.hpp>

#include <qtorsion/pearl_models.hpp>

using namespace qtorsion;

namespace {

const RationalField QQ;

TripleForm form_of(std::size_t b, std::initializer_list<std::array<long, 4>> entries)
{
    TripleForm f(b);
    for (const auto& e : entries)
        f.set(e[0] - 1, e[1] - 1, e[2] - 1, BigInt(e[3]));
    return f;
}

TripleForm random_form(std::size_t b, Rng& rng)
{
    TripleForm f(b);
    const std::uint64_t density = rng.uniform(1, 4);
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = i + 1; j < b; ++j)
            for (std::size_t k = j + 1; k < b; ++k)
                if (rng.chance(density, 4))
                    f.set(i, j, k, BigInt(rng.uniform(-2, 2)));
    return f;
}

template <class F>
std::vector<typename F::value_type> basis_vector(const F& field, std::size_t b, std::size_t i)
{
    std::vector<typename F::value_type> v(b, field.zero());
    v[i] = field.one();
    return v;
}

} // namespace

TEST_CASE("products in H_2")
{
    const auto vol = form_of(3, {{1, 2, 3, 1}});
    CHECK(product_h2(QQ, vol, 0, 1) == to_field(QQ, int_matrix({{0}, {0}, {1}})));
    CHECK(product_h2(QQ, vol, 1, 0) == -product_h2(QQ, vol, 0, 1));
    CHECK(product_h2(QQ, vol, 2, 2).is_zero());
    CHECK(product_h2(QQ, TripleForm(3), 0, 1).is_zero());
    CHECK_THROWS_AS(product_h2(QQ, vol, 0, 3), InputError);
    CHECK(vol(2, 1, 0) == BigInt(-1));
    CHECK_THROWS_AS(form_of(3, {{1, 1, 2, 1}}), InputError);
}

TEST_CASE("symplectic slices")
{
    const auto vol = form_of(3, {{1, 2, 3, 1}});
    CHECK(symplectic_slice(QQ, vol, basis_vector(QQ, 3, 0)) == Rational(1));
    CHECK(symplectic_slice(QQ, form_of(3, {{1, 2, 3, 7}}), basis_vector(QQ, 3, 0)) == Rational(49));
    CHECK_FALSE(symplectic_slice(QQ, TripleForm(3), basis_vector(QQ, 3, 1)));
    CHECK_THROWS_AS(symplectic_slice(QQ, vol, std::vector<Rational>(3, Rational(0))), InputError);

    const auto five = form_of(5, {{1, 2, 3, 1}, {1, 4, 5, 1}});
    const auto s = find_slice(QQ, five);
    REQUIRE(s.vector);
    CHECK(*s.vector == basis_vector(QQ, 5, 0));
    CHECK(*s.det == Rational(1));
    CHECK_FALSE(find_slice(QQ, TripleForm(4)).vector);
}

TEST_CASE("dichotomy classes")
{
    CHECK(dichotomy_class(QQ, form_of(3, {{1, 2, 3, 1}})) == Dichotomy::SlicedOddB);
    CHECK(dichotomy_class(QQ, TripleForm(4)) == Dichotomy::ZeroForm);
    CHECK(dichotomy_class(QQ, TripleForm(3)) == Dichotomy::ZeroForm);
    const PrimeField F3(3);
    const auto r = find_slice(F3, form_of(4, {{1, 2, 3, 1}}));
    CHECK_FALSE(r.randomized);
    CHECK(dichotomy_class(F3, form_of(4, {{1, 2, 3, 1}})) == Dichotomy::Incompatible);
    // b = 1: the form vanishes and the slice condition holds vacuously.
    CHECK(dichotomy_class(QQ, TripleForm(1)) == Dichotomy::SlicedOddB);
    CHECK_FALSE(ring_generated_by_h2(QQ, TripleForm(1)));
    // A multiple of p vanishes over F_p.
    CHECK(dichotomy_class(F3, form_of(3, {{1, 2, 3, 3}})) == Dichotomy::ZeroForm);
}

TEMPLATE_TEST_CASE("ring generation by H_2 is equivalent to a slice for 2 <= b <= 5", "", RationalField, PrimeField)
{
    std::vector<TestType> fields;
    if constexpr (std::is_same_v<TestType, RationalField>)
        fields = {RationalField{}};
    else
        fields = {PrimeField(3), PrimeField(5)};
    Rng rng(2024);
    std::size_t sliced = 0, total = 0;
    for (const auto& field : fields)
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t b = 2 + static_cast<std::size_t>(rng.uniform(0, 3));
            const auto f = random_form(b, rng);
            const bool slice = find_slice(field, f, 200, static_cast<std::uint64_t>(trial)).vector.has_value();
            CHECK(ring_generated_by_h2(field, f) == slice);
            sliced += slice;
            ++total;
        }
    CHECK(sliced > total / 10);
    CHECK(sliced < total);
}

TEST_CASE("ring generation without a slice at b = 6")
{
    // e1∧e2∧e3 + e4∧e5∧e6: the products span H_1 but b is even, so no slice exists.
    const auto f = form_of(6, {{1, 2, 3, 1}, {4, 5, 6, 1}});
    CHECK(ring_generated_by_h2(QQ, f));
    CHECK_FALSE(find_slice(PrimeField(3), f).vector);
    CHECK(dichotomy_class(PrimeField(3), f) == Dichotomy::Incompatible);
}

TEST_CASE("dichotomy is stable under unimodular changes of basis")
{
    Rng rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t b = 3 + 2 * static_cast<std::size_t>(rng.uniform(0, 1));
        const auto f = random_form(b, rng);
        const auto [g, ginv] = random_unimodular(b, rng);
        const auto f2 = f.transform(g);
        CHECK(f2.transform(ginv) == f);
        const PrimeField F5(5);
        CHECK(dichotomy_class(F5, f) == dichotomy_class(F5, f2));
        CHECK(ring_generated_by_h2(QQ, f) == ring_generated_by_h2(QQ, f2));
    }
}

TEST_CASE("Leibniz audit on the homology ring")
{
    const auto vol = form_of(3, {{1, 2, 3, 1}});
    const HomologyRing ring(QQ, vol);
    CHECK(ring.dim() == 8);
    CHECK(ring.leibniz_failures(zeros(QQ, 8, 8)).empty());
    // d(p) = ē_1 without the matching d(e_1) = [L] breaks the rule.
    auto r = zeros(QQ, 3, 1);
    r(0, 0) = 1;
    CHECK_FALSE(ring.leibniz_failures(ring.derivation(r, zeros(QQ, 3, 3), zeros(QQ, 1, 3))).empty());
    const auto D = solve_leibniz(QQ, vol, {Rational(1), Rational(0), Rational(0)});
    REQUIRE(D);
    CHECK(ring.leibniz_failures(ring.derivation(r, *D, r.transpose())).empty());
    auto Dbad = *D;
    Dbad(1, 2) += 1;
    CHECK_FALSE(ring.leibniz_failures(ring.derivation(r, Dbad, r.transpose())).empty());
}
