#include "higgsflow/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace higgsflow {

namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot writer assumes a little-endian host");

constexpr char kMagic[4] = {'H', 'F', 'M', 'S'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void save_metric(const std::string& path, const MetricField& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
    const Lattice& lat = h.lattice();
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(lat.n));
    put_u32(out, static_cast<std::uint32_t>(lat.points_per_axis));
    put_u32(out, static_cast<std::uint32_t>(h.rank()));
    for (int a = 0; a < lat.n; ++a) {
        const double L = lat.lengths[static_cast<size_t>(a)];
        out.write(reinterpret_cast<const char*>(&L), sizeof L);
    }
    const auto buf = h.field().component(0);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(cplx)));
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

MetricField load_metric(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[4];
    in.read(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path);
    if (get_u32(in) != kVersion) throw std::runtime_error("snapshot: unsupported version");
    Lattice lat;
    lat.n = static_cast<int>(get_u32(in));
    lat.points_per_axis = static_cast<int>(get_u32(in));
    const int rank = static_cast<int>(get_u32(in));
    for (int a = 0; a < lat.n; ++a) {
        double L = 0.0;
        in.read(reinterpret_cast<char*>(&L), sizeof L);
        lat.lengths[static_cast<size_t>(a)] = L;
    }
    if (lat.n == 1) lat.lengths[1] = lat.lengths[0];
    EndoFormField h(lat, 0, 0, rank);
    auto buf = h.component(0);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(cplx)));
    if (!in) throw std::runtime_error("snapshot: truncated data in " + path);
    return MetricField(std::move(h));
}

}  // namespace higgsflow
