#include "doctest.h"
#include "support/oracles.hpp"

TEST_CASE("numerical oracle registry") {
    for (const auto& c : testsupport::oracle_registry()) {
        INFO(c.name);
        const testsupport::CaseResult result = c.run();
        CHECK_MESSAGE(result.pass, c.name, ": ", result.detail);
    }
}

TEST_CASE("model invariant registry") {
    for (const auto& c : testsupport::invariant_registry()) {
        INFO(c.name);
        const testsupport::CaseResult result = c.run();
        CHECK_MESSAGE(result.pass, c.name, ": ", result.detail);
    }
}
