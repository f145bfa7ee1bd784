#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crashrepro/search/operators.hpp"
#include "crashrepro/sutlang/ast.hpp"
#include "crashrepro/sutlang/stacktrace.hpp"
#include "crashrepro/sutlang/testcase.hpp"

namespace crashrepro::harness {

/// A scenario directory: program/*.sut, tests/*.sut-test, crash.txt, and an
/// optional scenario.toml with `key = value` lines (target-frame-level plus
/// search-parameter overrides).
struct ScenarioBundle {
    std::string name;
    sut::Program program;
    std::vector<sut::TestCase> tests;
    sut::CrashReport crash;
    std::map<std::string, std::string> settings;
};

ScenarioBundle load_bundle(const std::filesystem::path& dir);

/// Applies recognized scenario settings (budget, population, ...) on top of
/// a base configuration; unknown keys raise an error.
void apply_settings(search::SearchConfig& config,
                    const std::map<std::string, std::string>& settings);

}  // namespace crashrepro::harness
