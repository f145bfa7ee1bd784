#include "crashrepro/harness/bundle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace crashrepro::harness {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sut::ParseError("cannot read file", path.string(), 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ext)
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_settings(const std::string& text,
                                                  const std::string& file) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw sut::ParseError("expected 'key = value'", file, no);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw sut::ParseError("expected 'key = value'", file, no);
        out[key] = value;
    }
    return out;
}

}  // namespace

ScenarioBundle load_bundle(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw sut::ParseError("scenario directory not found", dir.string(), 0);
    ScenarioBundle bundle;
    bundle.name = dir.filename().string();

    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& path : sorted_files(dir / "program", ".sut"))
        sources.emplace_back(path.filename().string(), read_file(path));
    if (sources.empty())
        throw sut::ParseError("no program sources", (dir / "program").string(), 0);
    bundle.program = sut::parse_program(sources);

    for (const auto& path : sorted_files(dir / "tests", ".sut-test"))
        bundle.tests.push_back(sut::parse_test(read_file(path), path.stem().string()));

    fs::path toml = dir / "scenario.toml";
    if (fs::exists(toml)) bundle.settings = parse_settings(read_file(toml), toml.string());

    int level = 1;
    auto it = bundle.settings.find("target-frame-level");
    if (it != bundle.settings.end()) level = std::stoi(it->second);

    fs::path crash_path = dir / "crash.txt";
    if (!fs::exists(crash_path))
        throw sut::ParseError("missing crash.txt", crash_path.string(), 0);
    bundle.crash = sut::parse_stack_trace(read_file(crash_path), level);
    sut::validate_report(bundle.crash, bundle.program);
    return bundle;
}

void apply_settings(search::SearchConfig& config,
                    const std::map<std::string, std::string>& settings) {
    for (const auto& [key, value] : settings) {
        if (key == "target-frame-level") continue;  // consumed by load_bundle
        if (key == "budget")
            config.budget = std::stoul(value);
        else if (key == "population")
            config.population_size = std::stoul(value);
        else if (key == "max-test-length")
            config.max_test_length = std::stoul(value);
        else if (key == "pick-init")
            config.seeding.pick_init = std::stod(value);
        else if (key == "pick-mut")
            config.seeding.pick_mut = std::stod(value);
        else if (key == "clone")
            config.seeding.clone = std::stod(value);
        else if (key == "step-limit")
            config.step_limit = std::stol(value);
        else
            throw sut::ParseError("unknown scenario setting: " + key, "scenario.toml", 0);
    }
}

}  // namespace crashrepro::harness
