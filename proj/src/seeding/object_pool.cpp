#include "crashrepro/seeding/object_pool.hpp"

#include <set>

#include "crashrepro/seeding/dissimilarity.hpp"

namespace crashrepro::seeding {

bool ObjectPool::has_fragments_for(const std::string& cls) const {
    auto it = entries.find(cls);
    return it != entries.end() && !it->second.empty();
}

const Fragment& ObjectPool::sample_fragment(const std::string& cls,
                                            behmodel::Rng& rng) const {
    const auto& list = entries.at(cls);
    ++draws;
    return list[rng() % list.size()];
}

ObjectPool build_model_pool(const ModelMap& models, const sut::CrashReport& crash,
                            const sut::Program& program, const SeedingConfig& config,
                            behmodel::Rng& rng) {
    ObjectPool pool;
    if (models.empty()) {
        pool.warnings.push_back("no models available, pool left empty");
        return pool;
    }

    std::set<std::string> classes;
    for (const auto& [name, cd] : program.classes) classes.insert(name);
    for (const auto& frame : crash.frames) classes.insert(frame.cls);

    for (const auto& cls : classes) {
        auto it = models.find(cls);
        if (it == models.end() || it->second.empty()) continue;
        auto behaviors =
            select_behaviors(it->second, config.behaviors_per_model,
                             behmodel::kDefaultMaxPathLength, rng, &pool.warnings,
                             config.candidate_multiplier);
        for (const auto& behavior : behaviors) {
            for (std::size_t i = 0; i < config.n_conc; ++i) {
                auto frag = concretize(behavior, program, rng, &pool.warnings);
                if (frag) pool.entries[cls].push_back(std::move(*frag));
            }
        }
    }
    return pool;
}

ObjectPool build_test_pool(const sut::Program& program,
                           const std::vector<sut::TestCase>& tests,
                           const std::string& target_class) {
    ObjectPool pool;
    analysis::CarveLog log;

    std::set<std::string> classes;
    for (const auto& [name, cd] : program.classes) classes.insert(name);
    auto carved = analysis::carve_objects(program, tests, classes, &log);
    for (auto& obj : carved) {
        Fragment frag{obj.class_name, obj.root_var, std::move(obj.stmts),
                      Provenance::Carved};
        pool.entries[frag.class_name].push_back(std::move(frag));
    }

    auto clones = analysis::clone_tests(program, tests, target_class, &log);
    for (auto& c : clones) pool.cloned_tests.push_back(std::move(c.test));

    pool.warnings = std::move(log.warnings);
    return pool;
}

std::string format_pool(const ObjectPool& pool) {
    std::string out;
    for (const auto& [cls, frags] : pool.entries) {
        for (const auto& frag : frags) {
            out += "class\t" + cls + "\tprovenance\t";
            out += frag.provenance == Provenance::Carved ? "carved" : "model-seeded";
            out += "\troot\t" + frag.root_var + "\n";
            out += sut::format_test(sut::TestCase{"fragment", frag.stmts});
        }
    }
    return out;
}

}  // namespace crashrepro::seeding
