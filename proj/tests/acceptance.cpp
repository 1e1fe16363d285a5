// Acceptance driver: full-mode checks 1-10 in process with their runtime
// budgets, then the byte-level determinism check through the CLI.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "garding/garding.hpp"

namespace {

/// Runtime budget in seconds per check id; 0 means none.
double budget(const std::string& id) {
    if (id == "C1") return 1;
    if (id == "C2") return 5;
    if (id == "C3") return 60;
    if (id == "C4") return 120;
    if (id == "C5") return 30;
    if (id == "C6") return 2;
    if (id == "C7") return 1;
    if (id == "C8") return 600;
    if (id == "C9") return 120;
    return 0;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& cli, const std::string& out) {
    const std::string cmd = "\"" + cli + "\" verify --seed 1 --out \"" + out + "\" > /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: acceptance <garding-cli> <scratch-dir>\n";
        return 2;
    }
    const std::string cli = argv[1], dir = argv[2];
    bool all = true;

    garding::verify::Options opts{1, true};
    garding::verify::run_all(opts, [&](const garding::verify::CheckResult& r) {
        if (r.id == "C11") return;
        const int n = std::stoi(r.id.substr(1));
        const double limit = budget(r.id);
        const bool in_time = limit == 0 || r.seconds < limit;
        const bool ok = r.passed && in_time;
        all = all && ok;
        char timing[64];
        std::snprintf(timing, sizeof timing, "%.2f s", r.seconds);
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << r.name << " (" << timing;
        if (limit > 0) std::cout << ", budget " << limit << " s";
        std::cout << ")";
        if (!r.passed) std::cout << " detail=" << r.detail.dump();
        if (!in_time) std::cout << " over budget";
        std::cout << '\n' << std::flush;
    });

    const std::string a = dir + "/acceptance_verify_a.json", b = dir + "/acceptance_verify_b.json";
    const int ca = run_cli(cli, a), cb = run_cli(cli, b);
    const std::string ja = slurp(a), jb = slurp(b);
    const bool same = ca == 0 && cb == 0 && !ja.empty() && ja == jb;
    all = all && same;
    std::cout << (same ? "[PASS]" : "[FAIL]") << " criterion 11: determinism (exit codes " << ca << ", " << cb
              << ", " << ja.size() << " bytes, " << (ja == jb ? "identical" : "different") << ")\n";
    return all ? 0 : 1;
}
