#include "regs/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte order shims are not implemented");

namespace regs {

namespace {

constexpr char magic[4] = {'R', 'G', 'S', '4'};
constexpr std::uint32_t format_version = 1;
constexpr char species_tags[4] = {'u', 'v', 'p', 'q'};
// magic + version + dim + 3*n + 3*length + time + tags
constexpr std::size_t header_bytes = 4 + 4 + 4 + 3 * 8 + 3 * 8 + 8 + 4;

template <class T>
void put(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T take(std::ifstream& in, std::size_t& offset, const std::string& path, const char* what) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(T)))
        throw SnapshotError("'" + path + "' truncated at byte offset " + std::to_string(offset) +
                            " while reading " + what);
    offset += sizeof(T);
    return v;
}

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SnapshotError("cannot open snapshot '" + path + "'");
    return in;
}

SnapshotHeader read_header(std::ifstream& in, std::size_t& offset, const std::string& path) {
    char m[4];
    in.read(m, 4);
    if (in.gcount() != 4 || std::memcmp(m, magic, 4) != 0)
        throw SnapshotError("'" + path + "' is not a state snapshot (bad magic)");
    offset += 4;
    SnapshotHeader h;
    h.version = take<std::uint32_t>(in, offset, path, "version");
    if (h.version != format_version)
        throw SnapshotError("'" + path + "' has unsupported format version " +
                            std::to_string(h.version));
    h.dim = static_cast<int>(take<std::uint32_t>(in, offset, path, "dim"));
    if (h.dim < 1 || h.dim > 3)
        throw SnapshotError("'" + path + "' has invalid dim " + std::to_string(h.dim));
    for (int a = 0; a < 3; ++a) {
        h.n[a] = take<std::uint64_t>(in, offset, path, "axis points");
        if (h.n[a] < 1) throw SnapshotError("'" + path + "' has invalid axis point count");
    }
    for (int a = 0; a < 3; ++a) {
        h.length[a] = take<double>(in, offset, path, "axis length");
        if (!(h.length[a] > 0.0))
            throw SnapshotError("'" + path + "' has invalid axis length");
    }
    h.time = take<double>(in, offset, path, "time");
    char tags[4];
    in.read(tags, 4);
    if (in.gcount() != 4 || std::memcmp(tags, species_tags, 4) != 0)
        throw SnapshotError("'" + path + "' has unexpected species order");
    offset += 4;
    return h;
}

} // namespace

void write_snapshot(const std::string& path, const State& s) {
    require_common_grid(s.c);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SnapshotError("cannot open '" + path + "' for writing");
    out.write(magic, 4);
    put(out, format_version);
    put(out, static_cast<std::uint32_t>(s.c.grid().dim));
    for (int a = 0; a < 3; ++a) put(out, static_cast<std::uint64_t>(s.c.grid().n[a]));
    for (int a = 0; a < 3; ++a) put(out, s.c.grid().length[a]);
    put(out, s.t);
    out.write(species_tags, 4);
    const std::streamsize block =
        static_cast<std::streamsize>(s.c.grid().total()) * static_cast<std::streamsize>(sizeof(double));
    for (int sp = 0; sp < 4; ++sp)
        out.write(reinterpret_cast<const char*>(s.c.species(sp).values.data()), block);
    out.flush();
    if (!out) throw SnapshotError("write to '" + path + "' failed");
}

State read_snapshot(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::size_t offset = 0;
    const SnapshotHeader h = read_header(in, offset, path);
    const GridSpec g = make_grid(h.dim,
                                 {static_cast<Eigen::Index>(h.n[0]),
                                  static_cast<Eigen::Index>(h.n[1]),
                                  static_cast<Eigen::Index>(h.n[2])},
                                 h.length);
    State s;
    s.t = h.time;
    s.c = make_field4(g);
    const std::size_t block = static_cast<std::size_t>(g.total()) * sizeof(double);
    for (int sp = 0; sp < 4; ++sp) {
        in.read(reinterpret_cast<char*>(s.c.species(sp).values.data()),
                static_cast<std::streamsize>(block));
        if (in.gcount() != static_cast<std::streamsize>(block))
            throw SnapshotError("'" + path + "' truncated at byte offset " +
                                std::to_string(offset + static_cast<std::size_t>(in.gcount())) +
                                " while reading species " + std::string(species_names[sp]));
        offset += block;
    }
    // anything extra means the file does not match its own header
    char probe;
    in.read(&probe, 1);
    if (in.gcount() != 0)
        throw SnapshotError("'" + path + "' has trailing bytes beyond the declared payload");
    return s;
}

SnapshotHeader inspect_snapshot(const std::string& path) {
    std::ifstream in = open_for_read(path);
    std::size_t offset = 0;
    return read_header(in, offset, path);
}

static_assert(header_bytes == 72);

} // namespace regs
