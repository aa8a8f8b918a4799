#include <doctest.h>

#include <cmath>

#include "crnpp/crn.hpp"
#include "crnpp/crn_json.hpp"
#include "crnpp/ode.hpp"
#include "crnpp/rk45.hpp"
#include "test_util.hpp"

using namespace crnpp;

namespace {

Species A = Species::user("A");
Species B = Species::user("B");
Species C = Species::user("C");

// CRN 1: A + B -> A + B + C, C -> 0
Crn example_crn() {
    Crn crn;
    Multiset ab;
    ab.add(A);
    ab.add(B);
    Multiset abc = ab;
    abc.add(C);
    crn.reactions.emplace_back(ab, abc, 1.0);
    crn.reactions.emplace_back(Multiset{{C, 1}}, Multiset{}, 1.0);
    return crn;
}

std::vector<double> deriv_at(const OdeSystem& sys, std::vector<double> y) {
    std::vector<double> d(sys.dim());
    sys.deriv(y.data(), d.data());
    return d;
}

}  // namespace

TEST_CASE("net_change") {
    Crn crn = example_crn();
    const Reaction& r = crn.reactions[0];
    CHECK(net_change(C, r) == 1);
    CHECK(net_change(A, r) == 0);  // catalytic input
    CHECK(net_change(B, r) == 0);

    Reaction annih(Multiset{{A, 2}}, Multiset{{B, 1}}, 1.0);
    CHECK(net_change(A, annih) == -2);
    CHECK(net_change(B, annih) == 1);
    CHECK(net_change(C, annih) == 0);
}

TEST_CASE("mass-action ODEs of the example network") {
    Crn crn = example_crn();
    crn.set_initial(A, 6.0);
    crn.set_initial(B, 2.0);
    OdeSystem sys(crn);
    REQUIRE(sys.dim() == 3);

    // d[A]/dt = 0, d[B]/dt = 0, d[C]/dt = [A][B] - [C]
    auto d = deriv_at(sys, {6.0, 2.0, 0.0});
    CHECK(d[sys.index_of(A)] == 0.0);
    CHECK(d[sys.index_of(B)] == 0.0);
    CHECK(d[sys.index_of(C)] == doctest::Approx(12.0));

    d = deriv_at(sys, {6.0, 2.0, 12.0});
    CHECK(d[sys.index_of(C)] == doctest::Approx(0.0));
}

TEST_CASE("empty CRN has a zero derivative everywhere") {
    Crn crn;
    crn.set_initial(A, 3.0);
    OdeSystem sys(crn);
    auto d = deriv_at(sys, {3.0});
    CHECK(d[0] == 0.0);
}

TEST_CASE("second-order reactant multiplicity") {
    // A + A ->(1) B at [A]=3: flux = 9, d[A]/dt = -18, d[B]/dt = +9
    Crn crn;
    crn.reactions.emplace_back(Multiset{{A, 2}}, Multiset{{B, 1}}, 1.0);
    OdeSystem sys(crn);
    auto d = deriv_at(sys, {3.0, 0.0});
    CHECK(d[sys.index_of(A)] == doctest::Approx(-18.0));
    CHECK(d[sys.index_of(B)] == doctest::Approx(9.0));
    CHECK(sys.flux(0, std::vector<double>{3.0, 0.0}.data()) == doctest::Approx(9.0));
}

TEST_CASE("catalyst neutrality: equal multiplicity on both sides contributes nothing") {
    testutil::Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        // random reaction, then force A catalytic with multiplicity 1..2
        int mult = 1 + rng.below(2);
        Multiset reac{{A, mult}}, prod{{A, mult}};
        if (rng.below(2)) reac.add(B, 1 + rng.below(2));
        prod.add(C, 1 + rng.below(2));
        Reaction r(reac, prod, 0.25 + rng.unit());
        CHECK(net_change(A, r) == 0);

        Crn crn;
        crn.reactions.push_back(r);
        OdeSystem sys(crn);
        std::vector<double> y(sys.dim());
        for (auto& v : y) v = rng.uniform(0.0, 5.0);
        std::vector<double> d(sys.dim());
        sys.deriv(y.data(), d.data());
        CHECK(d[sys.index_of(A)] == 0.0);
    }
}

TEST_CASE("merge: unions reactions and initials, keeps duplicates") {
    Crn one;
    one.reactions.emplace_back(Multiset{{A, 1}}, Multiset{{A, 1}, {C, 1}}, 1.0);
    one.set_initial(A, 2.0);
    Crn two = one;

    Crn merged = merge({one, two});
    CHECK(merged.reactions.size() == 2);
    CHECK(merged.initial_of(A) == 2.0);

    CHECK(merge({}).reactions.empty());

    Crn conflicting;
    conflicting.set_initial(A, 3.0);
    CHECK_THROWS_AS((void)merge({one, conflicting}), std::invalid_argument);
}

TEST_CASE("merged duplicate reactions double the flux (vs single reaction at k=2)") {
    // two copies of A -> A + C, k=1 each
    Crn dup;
    dup.reactions.emplace_back(Multiset{{A, 1}}, Multiset{{A, 1}, {C, 1}}, 1.0);
    dup.set_initial(A, 1.5);
    Crn merged = merge({dup, dup});

    Crn doubled;
    doubled.reactions.emplace_back(Multiset{{A, 1}}, Multiset{{A, 1}, {C, 1}}, 2.0);
    doubled.set_initial(A, 1.5);

    auto run = [](const Crn& crn) {
        OdeSystem sys(crn);
        std::vector<double> y(sys.dim(), 0.0);
        y[sys.index_of(A)] = crn.initial_of(A);
        SolverConfig cfg;
        integrate_rk45([&](const double* s, double* d) { sys.deriv(s, d); }, y, 0.0, 5.0, cfg,
                       [](std::vector<double>&) { return false; },
                       [](double, const std::vector<double>&) {});
        return y[sys.index_of(C)];
    };

    double c_dup = run(merged);
    double c_k2 = run(doubled);
    CHECK(c_dup == doctest::Approx(c_k2).epsilon(1e-9));
    CHECK(c_dup == doctest::Approx(2.0 * 1.5 * 5.0).epsilon(1e-8));  // d[C]/dt = 2[A]
}

TEST_CASE("species ordering is stable: namespace then name") {
    Crn crn;
    crn.set_initial(Species::clock("X3"), 1.0);
    crn.set_initial(Species::user("zeta"), 1.0);
    crn.set_initial(Species::flag("XgtY"), 1.0);
    crn.set_initial(Species::user("alpha"), 1.0);
    auto all = crn.all_species();
    REQUIRE(all.size() == 4);
    CHECK(all[0].str() == "alpha");
    CHECK(all[1].str() == "zeta");
    CHECK(all[2].str() == "clk_X3");
    CHECK(all[3].str() == "flag_XgtY");
}

TEST_CASE("reaction construction rejects bad inputs") {
    CHECK_THROWS_AS(Reaction(Multiset{{A, 1}}, Multiset{}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Reaction(Multiset{}, Multiset{}, 1.0), std::invalid_argument);
}

TEST_CASE("CRN JSON has stable key order") {
    Crn crn = example_crn();
    crn.set_initial(A, 6.0);
    crn.set_initial(B, 2.0);
    std::string a = dump_json(to_json(crn));
    std::string b = dump_json(to_json(crn));
    CHECK(a == b);
    CHECK(a.find("\"species\"") != std::string::npos);
    CHECK(a.find("\"reactions\"") != std::string::npos);
    // species block lists A before B before C
    CHECK(a.find("\"A\"") < a.find("\"B\""));
    CHECK(a.find("\"B\"") < a.find("\"C\""));
}
