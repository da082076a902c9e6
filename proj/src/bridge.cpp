#include "seqsat/bridge.hpp"

#include "seqsat/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace seqsat {

BridgeResult solve_via_dimacs(const Cnf& cnf, std::span<const Lit> assumptions,
                              const std::string& command) {
    char path[] = "/tmp/seqsat-bridge-XXXXXX";
    const int fd = ::mkstemp(path);
    if (fd < 0) raise(Errc::Io, "cannot create temporary DIMACS file");
    ::close(fd);

    {
        Cnf with_assumptions = cnf;
        for (Lit p : assumptions) with_assumptions.add_clause({p});
        std::ofstream out(path);
        export_dimacs(with_assumptions, out);
    }

    const std::string cmdline = command + " " + path + " 2>/dev/null";
    FILE* pipe = ::popen(cmdline.c_str(), "r");
    if (!pipe) {
        std::remove(path);
        raise(Errc::Io, "cannot run external solver '" + command + "'");
    }
    std::string output;
    char buffer[4096];
    std::size_t got;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
    ::pclose(pipe);
    std::remove(path);

    BridgeResult result;
    bool verdict_seen = false;
    std::istringstream lines(output);
    std::string line;
    result.model.assign(cnf.var_count, false);
    while (std::getline(lines, line)) {
        if (line.rfind("s ", 0) == 0) {
            verdict_seen = true;
            result.sat = line.find("UNSATISFIABLE") == std::string::npos &&
                         line.find("SATISFIABLE") != std::string::npos;
        } else if (line.rfind("v ", 0) == 0) {
            std::istringstream values(line.substr(2));
            int d;
            while (values >> d)
                if (d != 0 && std::abs(d) <= cnf.var_count) result.model[std::abs(d) - 1] = d > 0;
        }
    }
    if (!verdict_seen)
        raise(Errc::Io, "external solver '" + command + "' produced no 's' verdict line");
    return result;
}

} // namespace seqsat
