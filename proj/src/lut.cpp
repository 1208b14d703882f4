#include "wfc/lut.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "wfc/util.hpp"

namespace wfc {

namespace {
constexpr char kMagic[8] = {'W', 'F', 'C', 'L', 'U', 'T', '1', '\n'};
}

std::size_t LutAxes::node_count() const {
    std::size_t n = 1;
    for (const auto& a : values) n *= a.size();
    return n;
}

void LutAxes::validate() const {
    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        const auto& a = values[i];
        if (a.empty()) {
            throw std::invalid_argument(std::string("LutAxes: empty axis ") + kLutAxisNames[i]);
        }
        for (std::size_t k = 1; k < a.size(); ++k) {
            if (!(a[k] > a[k - 1])) {
                throw std::invalid_argument(std::string("LutAxes: axis ") + kLutAxisNames[i] +
                                            " must be strictly increasing");
            }
        }
    }
}

LutAxes LutAxes::full_default() {
    LutAxes a;
    a.values[0] = {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 19, 25};
    a.values[1] = {0.03, 0.10, 0.20};
    a.values[2] = {-30, -20, -10, 0, 10, 20, 30};
    a.values[3] = {-6, -4, -2, 0, 2, 4, 6};
    a.values[4] = {0.0, 0.3, 0.5};
    a.values[5] = {0.65, 1.2, 1.73};
    a.values[6] = {-1.5, -0.6, 0.0, 0.6, 1.5};
    return a;
}

FatigueLut::FatigueLut(LutAxes axes, std::vector<double> values, LutBuildMeta meta)
    : axes_(std::move(axes)), values_(std::move(values)), meta_(std::move(meta)) {
    axes_.validate();
    if (values_.size() != axes_.node_count() * kLutValuesPerNode) {
        throw std::invalid_argument("FatigueLut: payload size does not match the grid");
    }
}

std::size_t FatigueLut::flat_index(const std::array<std::size_t, kLutAxisCount>& idx) const {
    std::size_t flat = 0;
    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        const std::size_t n = axes_.values[i].size();
        if (idx[i] >= n) throw std::out_of_range("FatigueLut: node index out of range");
        flat = flat * n + idx[i];
    }
    return flat;
}

std::array<double, kLutValuesPerNode>
FatigueLut::node_values(const std::array<std::size_t, kLutAxisCount>& idx) const {
    std::array<double, kLutValuesPerNode> out{};
    const std::size_t base = flat_index(idx) * kLutValuesPerNode;
    std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(base), kLutValuesPerNode,
                out.begin());
    return out;
}

LutQueryResult FatigueLut::interpolate(const std::array<double, kLutAxisCount>& at) const {
    if (values_.empty()) throw std::logic_error("FatigueLut: empty table");
    std::array<std::size_t, kLutAxisCount> lo{};
    std::array<double, kLutAxisCount> t{};
    bool clamped = false;

    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        const auto& a = axes_.values[i];
        double x = at[i];
        if (x < a.front()) {
            x = a.front();
            clamped = true;
        } else if (x > a.back()) {
            x = a.back();
            clamped = true;
        }
        if (a.size() == 1) {
            lo[i] = 0;
            t[i] = 0.0;
            continue;
        }
        auto it = std::upper_bound(a.begin(), a.end(), x);
        std::size_t hi = static_cast<std::size_t>(it - a.begin());
        if (hi == 0) hi = 1;
        if (hi >= a.size()) hi = a.size() - 1;
        lo[i] = hi - 1;
        t[i] = (x - a[lo[i]]) / (a[hi] - a[lo[i]]);
    }

    LutQueryResult out;
    out.clamped = clamped;
    for (std::size_t corner = 0; corner < (1u << kLutAxisCount); ++corner) {
        double w = 1.0;
        std::array<std::size_t, kLutAxisCount> idx{};
        for (std::size_t i = 0; i < kLutAxisCount; ++i) {
            const bool upper = (corner >> i) & 1u;
            const double wi = upper ? t[i] : 1.0 - t[i];
            if (wi == 0.0) {
                w = 0.0;
                break;
            }
            w *= wi;
            idx[i] = lo[i] + (upper ? 1 : 0);
            if (idx[i] >= axes_.values[i].size()) idx[i] = axes_.values[i].size() - 1;
        }
        if (w == 0.0) continue;
        const std::size_t base = flat_index(idx) * kLutValuesPerNode;
        for (std::size_t c = 0; c < kLutChannelCount; ++c) {
            out.del[c] += w * values_[base + c];
            out.mean[c] += w * values_[base + kLutChannelCount + c];
        }
    }
    return out;
}

std::string FatigueLut::provenance_hash() const {
    Fnv1a64 h;
    for (const auto& a : axes_.values) h.update(std::span<const double>(a));
    h.update(std::span<const double>(values_));
    return h.hex();
}

namespace {

nlohmann::json meta_to_json(const LutBuildMeta& m) {
    nlohmann::json j;
    j["duration_s"] = m.duration_s;
    j["sample_rate_hz"] = m.sample_rate_hz;
    j["f_eq_hz"] = m.f_eq_hz;
    j["base_seed"] = m.base_seed;
    j["seed_epsilon"] = m.seeds.epsilon;
    j["seed_tau_s"] = m.seeds.tau_s;
    nlohmann::json sched = nlohmann::json::array();
    for (const auto& [ti, n] : m.seeds.table) sched.push_back({ti, n});
    j["seed_schedule"] = sched;
    return j;
}

LutBuildMeta meta_from_json(const nlohmann::json& j) {
    LutBuildMeta m;
    m.duration_s = j.at("duration_s").get<double>();
    m.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    m.f_eq_hz = j.at("f_eq_hz").get<double>();
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.seeds.epsilon = j.at("seed_epsilon").get<double>();
    m.seeds.tau_s = j.at("seed_tau_s").get<double>();
    m.seeds.table.clear();
    for (const auto& row : j.at("seed_schedule")) {
        m.seeds.table.emplace_back(row.at(0).get<double>(), row.at(1).get<int>());
    }
    return m;
}

}  // namespace

void FatigueLut::save(const std::string& path) const {
    nlohmann::json header;
    nlohmann::json axes;
    for (std::size_t i = 0; i < kLutAxisCount; ++i) axes[kLutAxisNames[i]] = axes_.values[i];
    header["axes"] = axes;
    header["channels"] = kLutChannelNames;
    header["meta"] = meta_to_json(meta_);
    header["payload_hash"] = provenance_hash();
    const std::string htext = header.dump();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("FatigueLut: cannot open for writing: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::uint64_t hlen = htext.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
    out.write(reinterpret_cast<const char*>(values_.data()),
              static_cast<std::streamsize>(values_.size() * sizeof(double)));
    if (!out) throw std::runtime_error("FatigueLut: write failed: " + path);
}

FatigueLut FatigueLut::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("FatigueLut: cannot open: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw std::runtime_error("FatigueLut: bad magic in " + path);
    }
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    if (!in || hlen > (1u << 26)) throw std::runtime_error("FatigueLut: bad header length");
    std::string htext(hlen, '\0');
    in.read(htext.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw std::runtime_error("FatigueLut: truncated header");
    const nlohmann::json header = nlohmann::json::parse(htext);

    LutAxes axes;
    for (std::size_t i = 0; i < kLutAxisCount; ++i) {
        axes.values[i] = header.at("axes").at(kLutAxisNames[i]).get<std::vector<double>>();
    }
    axes.validate();
    std::vector<double> values(axes.node_count() * kLutValuesPerNode);
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("FatigueLut: truncated payload");

    FatigueLut lut(std::move(axes), std::move(values), meta_from_json(header.at("meta")));
    const std::string expect = header.at("payload_hash").get<std::string>();
    if (lut.provenance_hash() != expect) {
        throw std::runtime_error("FatigueLut: payload hash mismatch in " + path);
    }
    return lut;
}

void FatigueLut::dump_csv(std::ostream& out) const {
    for (std::size_t i = 0; i < kLutAxisCount; ++i) out << kLutAxisNames[i] << ',';
    for (std::size_t c = 0; c < kLutChannelCount; ++c) out << "del_" << kLutChannelNames[c] << ',';
    for (std::size_t c = 0; c < kLutChannelCount; ++c) {
        out << "mean_" << kLutChannelNames[c] << (c + 1 < kLutChannelCount ? ',' : '\n');
    }
    std::array<std::size_t, kLutAxisCount> idx{};
    const std::size_t total = node_count();
    char buf[64];
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t i = 0; i < kLutAxisCount; ++i) {
            std::snprintf(buf, sizeof(buf), "%.9g,", axes_.values[i][idx[i]]);
            out << buf;
        }
        const std::size_t base = flat * kLutValuesPerNode;
        for (std::size_t v = 0; v < kLutValuesPerNode; ++v) {
            std::snprintf(buf, sizeof(buf), "%.9g%c", values_[base + v],
                          v + 1 < kLutValuesPerNode ? ',' : '\n');
            out << buf;
        }
        for (std::size_t i = kLutAxisCount; i-- > 0;) {
            if (++idx[i] < axes_.values[i].size()) break;
            idx[i] = 0;
        }
    }
}

}  // namespace wfc
