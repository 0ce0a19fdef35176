#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "ovib/validate.hpp"

using namespace ovib;

namespace {

const validate::CheckResult* find_check(const validate::ValidationReport& rep,
                                        const std::string& name) {
    for (const auto& c : rep.checks)
        if (c.name == name) return &c;
    return nullptr;
}

} // namespace

TEST_CASE("desk-scale battery passes on a shorter domain at the reference spacing") {
    validate::ValidationOptions opt;
    opt.grid = Grid(12.0, 2401);
    opt.fock_n_max = 150;
    const auto rep = validate::run_validation(opt);
    for (const auto& c : rep.checks) {
        INFO(c.name, ": ", c.detail);
        CHECK(c.pass);
    }
    CHECK(rep.all_pass());
}

TEST_CASE("a 10x coarser grid surfaces the resolution guard") {
    validate::ValidationOptions opt;
    opt.grid = Grid(12.0, 121);
    const auto rep = validate::run_validation(opt);
    const auto* c = find_check(rep, "grid_invariants");
    REQUIRE(c != nullptr);
    CHECK(!c->pass);
    CHECK(c->detail.find("oscillation") != std::string::npos);
    CHECK(!rep.all_pass());
}

TEST_CASE("a starved phonon basis fails the oracle with a truncation diagnosis") {
    validate::ValidationOptions opt;
    opt.grid = Grid(12.0, 1201);
    opt.fock_n_max = 20;
    const auto rep = validate::run_validation(opt);
    const auto* c = find_check(rep, "oracle_equivalence");
    REQUIRE(c != nullptr);
    CHECK(!c->pass);
    CHECK(c->detail.find("truncation-limited") != std::string::npos);
    CHECK(!rep.all_pass());
}
