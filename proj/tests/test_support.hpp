#pragma once

#include "heckit/panel.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace heckit::testing {

inline std::string snapshot_path() { return std::string(HECKIT_DATA_DIR) + "/snapshot_2021-01-30.csv"; }

inline const Panel& snapshot() {
    static const Panel panel = load_panel(snapshot_path(), default_schema());
    return panel;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("heckit_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the heckit binary with the given arguments, capturing both streams.
inline CommandResult run_cli(const std::string& args, const std::filesystem::path& work) {
    const auto out = work / "stdout.txt";
    const auto err = work / "stderr.txt";
    const std::string cmd =
        std::string("\"") + HECKIT_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    CommandResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    std::filesystem::remove(out);
    std::filesystem::remove(err);
    return r;
}

// Relative path to file contents for every regular file below root.
inline std::map<std::string, std::string> read_tree(const std::filesystem::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) files[std::filesystem::relative(e.path(), root).generic_string()] = slurp(e.path());
    }
    return files;
}

}  // namespace heckit::testing
