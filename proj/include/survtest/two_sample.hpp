#pragma once

#include "survtest/composite_test.hpp"
#include "survtest/rank_tests.hpp"

namespace survtest {

inline TestOutcome run_test(Method m, const TwoSampleDataset& ds) {
    switch (m) {
        case Method::gehan: return gehan_test(ds);
        case Method::cox_mantel: return cox_mantel_test(ds);
        case Method::logrank: return logrank_test(ds);
        case Method::peto_peto: return peto_peto_test(ds);
        case Method::proposed: return proposed_test(ds);
    }
    throw std::invalid_argument("unknown method");
}

}  // namespace survtest
