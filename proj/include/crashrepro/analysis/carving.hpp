#pragma once

#include <set>
#include <string>
#include <vector>

#include "crashrepro/sutlang/ast.hpp"
#include "crashrepro/sutlang/interpreter.hpp"
#include "crashrepro/sutlang/testcase.hpp"

namespace crashrepro::analysis {

/// A replayable object-construction fragment carved from an existing test:
/// the construction statement plus the harness-level calls on that object,
/// with literal (or recursively carved) arguments.
struct CarvedObject {
    std::string class_name;
    std::string root_var;  // variable holding the carved object
    std::vector<sut::TStmt> stmts;
};

struct ClonedTest {
    sut::TestCase test;  // assertions stripped
};

struct CarveLog {
    std::vector<std::string> warnings;
};

std::vector<CarvedObject> carve_objects(const sut::Program& program,
                                        const std::vector<sut::TestCase>& tests,
                                        const std::set<std::string>& target_classes,
                                        CarveLog* log = nullptr,
                                        long step_limit = sut::kDefaultStepLimit);

std::vector<ClonedTest> clone_tests(const sut::Program& program,
                                    const std::vector<sut::TestCase>& tests,
                                    const std::string& target_class, CarveLog* log = nullptr,
                                    long step_limit = sut::kDefaultStepLimit);

}  // namespace crashrepro::analysis
