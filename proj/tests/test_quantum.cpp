#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "bb84/quantum.hpp"
#include "oracles.hpp"

using namespace bb84;

namespace {

constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);

QuantumState at(double theta) { return QuantumState::from_radians(theta); }

} // namespace

TEST(HilbertAngle, ReducesModuloPi) {
    EXPECT_DOUBLE_EQ(HilbertAngle(pi + 0.25).radians(), 0.25);
    EXPECT_NEAR(HilbertAngle(-pi / 4).radians(), 3 * pi / 4, 1e-15);
    EXPECT_EQ(HilbertAngle(pi).radians(), 0.0);
    EXPECT_TRUE(at(-pi / 4).same_ray(at(3 * pi / 4)));
    EXPECT_TRUE(at(1e-13).same_ray(at(pi - 1e-13)));
}

TEST(Overlap, MatchesAncillaProducts) {
    const auto alpha = at(pi / 6);
    EXPECT_NEAR(overlap(alpha, at(0)), sqrt3 / 2, 1e-15);
    EXPECT_NEAR(overlap(alpha, at(pi / 2)), 0.5, 1e-15);
    EXPECT_NEAR(overlap(alpha, at(pi / 4)), (std::sqrt(6.0) + std::sqrt(2.0)) / 4, 1e-15);
    // Ray at -pi/4, i.e. (sqrt2/2)|0> - (sqrt2/2)|pi/2>.
    EXPECT_NEAR(std::fabs(overlap(alpha, at(3 * pi / 4))), (std::sqrt(6.0) - std::sqrt(2.0)) / 4, 1e-15);
    EXPECT_EQ(overlap(at(0), at(0)), 1.0);
}

TEST(Overlap, SignalStatesAreOrthogonalWithinAndUnbiasedAcrossBases) {
    const auto bqs = standard_bqs();
    for (std::size_t i = 0; i < bqs.size(); ++i) {
        for (std::size_t j = 0; j < bqs.size(); ++j) {
            if (i == j) continue;
            const bool same_basis = i / 2 == j / 2;
            const double o = overlap(bqs[i], bqs[j]);
            if (same_basis)
                EXPECT_NEAR(o, 0.0, 1e-15);
            else
                EXPECT_NEAR(o * o, 0.5, 1e-15);
        }
    }
}

TEST(BornProbability, Examples) {
    EXPECT_NEAR(born_probability(at(pi / 4), HilbertAngle(0)), 0.5, 1e-15);
    EXPECT_NEAR(born_probability(at(0), HilbertAngle(pi / 6)), 0.75, 1e-15);
    EXPECT_NEAR(born_probability(at(pi / 2), HilbertAngle(pi / 2)), 1.0, 1e-15);
}

TEST(BornProbability, OutcomesOfAnyBasisSumToOne) {
    RandomSource rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto s = at(rng.uniform() * 2 * pi);
        const MeasurementBasis b{HilbertAngle(rng.uniform() * pi)};
        EXPECT_NEAR(born_probability(s, b.outcome(0)) + born_probability(s, b.outcome(1)), 1.0, 1e-12);
    }
}

TEST(Coding, EncodeDecodeRoundTrip) {
    for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
        for (Bit bit : {Bit{0}, Bit{1}}) {
            const auto enc = decode(encode(bit, b));
            ASSERT_TRUE(enc);
            EXPECT_EQ(enc->basis, b);
            EXPECT_EQ(enc->bit, bit);
        }
    }
    EXPECT_EQ(encode(0, Basis::Rectilinear), at(0));
    EXPECT_EQ(encode(1, Basis::Rectilinear), at(pi / 2));
    EXPECT_EQ(encode(0, Basis::Diagonal), at(pi / 4));
    EXPECT_TRUE(encode(1, Basis::Diagonal).same_ray(at(3 * pi / 4)));
    EXPECT_FALSE(decode(at(pi / 8)));
}

TEST(Measure, EigenstatesAreDeterministicAndUnchanged) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RandomSource rng(seed);
        for (Basis b : {Basis::Rectilinear, Basis::Diagonal}) {
            for (Bit bit : {Bit{0}, Bit{1}}) {
                const auto s = encode(bit, b);
                const auto m = measure(s, b, rng);
                EXPECT_EQ(m.bit, bit);
                EXPECT_EQ(m.state, s);
            }
        }
    }
}

TEST(Measure, DiagonalStateInRectilinearIsFair) {
    RandomSource rng(2024);
    constexpr std::size_t n = 100000;
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto m = measure(at(pi / 4), Basis::Rectilinear, rng);
        zeros += m.bit == 0;
        ASSERT_TRUE(m.state == encode(m.bit, Basis::Rectilinear));
    }
    const double p = oracle::prob(oracle::ray(pi / 4), oracle::ray(0));
    EXPECT_NEAR(static_cast<double>(zeros) / n, p, 4 * oracle::binomial_sigma(p, n));
}

TEST(Measure, AncillaBasisFrequencyOnZero) {
    RandomSource rng(99);
    constexpr std::size_t n = 100000;
    std::size_t alpha = 0;
    const MeasurementBasis b{HilbertAngle(pi / 6)};
    for (std::size_t i = 0; i < n; ++i) alpha += measure(at(0), b, rng).bit == 0;
    EXPECT_NEAR(static_cast<double>(alpha) / n, 0.75, 4 * oracle::binomial_sigma(0.75, n));
}

TEST(Measure, ReproducibleFromSeed) {
    RandomSource a(123), b(123);
    for (int i = 0; i < 1000; ++i) {
        const auto s = at(0.1 * i);
        EXPECT_EQ(measure(s, Basis::Diagonal, a).bit, measure(s, Basis::Diagonal, b).bit);
    }
}

TEST(ReferenceList, DefaultAncillaReproducesTable) {
    const auto list = build_reference_list(pi / 6);
    ASSERT_EQ(list.size(), 4U);
    const auto e = list.entries();
    const double expected[4] = {0.75, 0.25, (sqrt3 + 1) * (sqrt3 + 1) / 8, (sqrt3 - 1) * (sqrt3 - 1) / 8};
    const double printed[4] = {0.75, 0.25, 0.933, 0.067};
    const auto bqs = standard_bqs();
    for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(e[k].state, bqs[k]);
        EXPECT_NEAR(e[k].m, expected[k], 1e-12);
        EXPECT_NEAR(e[k].m, printed[k], 5e-4);
    }
}

TEST(ReferenceList, LookupInvertsBuild) {
    const auto list = build_reference_list();
    for (const auto& s : standard_bqs()) {
        EXPECT_EQ(lookup(list, born_probability(s, list.ancilla().angle())), s);
    }
    EXPECT_EQ(lookup(list, 0.25), at(pi / 2));
    EXPECT_EQ(lookup(list, 0.75), at(0));
    EXPECT_THROW(lookup(list, 0.5), NoMatch);
    EXPECT_NO_THROW(lookup(list, 0.25 + 5e-10));
    EXPECT_THROW(lookup(list, 0.25 + 2e-9), NoMatch);
}

TEST(ReferenceList, RectilinearAncillaIsDegenerate) {
    EXPECT_THROW(build_reference_list(0.0), DegenerateAncilla);
    EXPECT_THROW(build_reference_list(pi / 4), DegenerateAncilla);
    EXPECT_THROW(build_reference_list(pi / 2), DegenerateAncilla);
}

TEST(ReferenceList, DegeneracyAgreesWithPairwiseOracle) {
    // Oracle: cos^2 at the four angle differences, pairwise compared.
    const auto oracle_distinct = [](double theta, std::vector<double>& m) {
        m.clear();
        for (double s : {0.0, pi / 2, pi / 4, 3 * pi / 4})
            m.push_back(oracle::prob(oracle::ray(s), oracle::ray(theta)));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i + 1; j < m.size(); ++j)
                if (std::fabs(m[i] - m[j]) <= 1e-9) return false;
        return true;
    };
    std::vector<double> m;
    // pi/8 sits halfway between |0> and |pi/4>, so m_1 = m_3.
    ASSERT_FALSE(oracle_distinct(pi / 8, m));
    EXPECT_THROW(build_reference_list(pi / 8), DegenerateAncilla);

    for (double theta : {pi / 6, pi / 12, pi / 5, 1.0, 2.0, 3.0}) {
        ASSERT_TRUE(oracle_distinct(theta, m)) << theta;
        const auto list = build_reference_list(theta);
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(list.entries()[k].m, m[k], 1e-15);
    }
    for (int i = 0; i < 64; ++i) {
        const double theta = i * pi / 64;
        if (oracle_distinct(theta, m))
            EXPECT_NO_THROW(build_reference_list(theta)) << theta;
        else
            EXPECT_THROW(build_reference_list(theta), DegenerateAncilla) << theta;
    }
}

TEST(ReferenceList, RejectsEmptyAlphabet) {
    std::vector<QuantumState> none;
    EXPECT_THROW(build_reference_list(at(pi / 6), none), InvalidParams);
}
