#include "bubblefield/errors.hpp"
#include "bubblefield/levelset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace bubblefield::levelset {

namespace {
constexpr const char* kModule = "levelset";

void put(std::string& out, double v) {
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(n));
}
}  // namespace

std::string format_snapshot(const LevelSetField& f) {
    const Grid2D& g = f.grid;
    std::string out = "# levelset " + std::to_string(g.nx) + ' ' + std::to_string(g.ny);
    for (double v : {g.dx, g.dy, g.ax, g.ay, f.time}) {
        out += ' ';
        put(out, v);
    }
    out += '\n';
    out.reserve(out.size() + g.size() * 24);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i > 0) out += ' ';
            put(out, f.at(i, j));
        }
        out += '\n';
    }
    return out;
}

LevelSetField parse_snapshot(const std::string& text) {
    std::istringstream in(text);
    std::string hash, tag;
    Grid2D g;
    double t = 0.0;
    if (!(in >> hash >> tag >> g.nx >> g.ny >> g.dx >> g.dy >> g.ax >> g.ay >> t) || hash != "#" ||
        tag != "levelset") {
        throw Error(ErrorCode::IoError, kModule, "malformed snapshot header");
    }
    g.bx = g.ax + g.dx * g.nx;
    g.by = g.ay + g.dy * g.ny;
    g.validate();
    LevelSetField f(g, t);
    for (auto& v : f.u) {
        if (!(in >> v)) throw Error(ErrorCode::IoError, kModule, "snapshot has fewer values than nx * ny");
    }
    double extra;
    if (in >> extra) throw Error(ErrorCode::IoError, kModule, "snapshot has more values than nx * ny");
    return f;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error(ErrorCode::IoError, kModule, "cannot open " + tmp.string());
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!os) throw Error(ErrorCode::IoError, kModule, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, kModule, "rename to " + path.string() + ": " + ec.message());
}

void write_snapshot(const LevelSetField& field, const std::filesystem::path& path) {
    write_file_atomic(path, format_snapshot(field));
}

LevelSetField read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::IoError, kModule, "cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_snapshot(ss.str());
}

}  // namespace bubblefield::levelset
