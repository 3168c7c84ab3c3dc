#include "chainsim/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace chainsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw ConfigError("config error: " + std::string(key) + ": malformed value '" + std::string(value) + "'");
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) bad_value(key, value);
    return out;
}

std::uint32_t parse_u32(std::string_view key, std::string_view value) {
    const std::uint64_t v = parse_u64(key, value);
    if (v > UINT32_MAX) bad_value(key, value);
    return static_cast<std::uint32_t>(v);
}

double parse_f64(std::string_view key, std::string_view value) {
    double out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out)) bad_value(key, value);
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "0") return false;
    if (value == "1") return true;
    bad_value(key, value);
}

} // namespace

std::uint32_t SimConfig::miner_count() const {
    const auto m = static_cast<std::uint32_t>(std::floor(static_cast<double>(nodes) * miner_fraction()));
    return std::max<std::uint32_t>(1, std::min(m, nodes));
}

void apply_config_kv(SimConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "TTL") cfg.ttl = parse_u32(key, value);
    else if (key == "DISSEMINATION") cfg.dissemination = parse_u32(key, value);
    else if (key == "PROBABILITY_FUNCTION") cfg.probability_function = parse_u32(key, value);
    else if (key == "FUNC_COEFF_HIGHER") cfg.func_coeff_higher = parse_f64(key, value);
    else if (key == "FUNC_COEFF_LOWER") cfg.func_coeff_lower = parse_f64(key, value);
    else if (key == "END_CLOCK") cfg.end_clock = parse_u32(key, value);
    else if (key == "NODES") cfg.nodes = parse_u32(key, value);
    else if (key == "MINERS_COUNT") cfg.miners_percent = parse_f64(key, value);
    else if (key == "DIFFICULTY") cfg.difficulty = parse_f64(key, value);
    else if (key == "HASHRATE") cfg.total_hashrate = parse_f64(key, value);
    else if (key == "EDGES_PER_NODE") cfg.edges_per_node = parse_u32(key, value);
    else if (key == "MASTER_SEED") cfg.master_seed = parse_u64(key, value);
    else if (key == "WORKERS") cfg.workers = parse_u32(key, value);
    else if (key == "FIXED_PROB") cfg.fixed_prob = parse_f64(key, value);
    else if (key == "MAX_BLOCK_TX") cfg.max_block_tx = parse_u32(key, value);
    else if (key == "TX_ORIGIN") cfg.tx.origin = parse_u32(key, value);
    else if (key == "TX_PERIOD") cfg.tx.period = parse_u32(key, value);
    else if (key == "TX_COUNT") cfg.tx.count = parse_u32(key, value);
    else if (key == "ATTACK_ENABLED") cfg.attack.enabled = parse_bool(key, value);
    else if (key == "ATTACK_TARGET") cfg.attack.target = parse_u32(key, value);
    else if (key == "ATTACK_COUNT") cfg.attack.count = parse_u32(key, value);
    else if (key == "ATTACK_SEED") cfg.attack.seed = parse_u64(key, value);
    else throw ConfigError("config error: unknown key '" + std::string(key) + "'");
}

void validate_config(const SimConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError("config error: " + msg); };
    if (cfg.nodes < 2) fail("NODES must be >= 2 (got " + std::to_string(cfg.nodes) + ")");
    if (cfg.ttl < 1) fail("TTL must be >= 1");
    if (cfg.ttl > 255) fail("TTL must be <= 255");
    if (cfg.edges_per_node < 1) fail("EDGES_PER_NODE must be >= 1");
    if (cfg.edges_per_node >= cfg.nodes) fail("EDGES_PER_NODE must be < NODES");
    if (!(cfg.miners_percent > 0.0) || cfg.miners_percent > 100.0)
        fail("MINERS_COUNT must be a percentage in (0, 100]");
    if (!(cfg.difficulty > 0.0)) fail("DIFFICULTY must be > 0");
    if (!(cfg.total_hashrate > 0.0)) fail("HASHRATE must be > 0");
    if (cfg.workers < 1) fail("WORKERS must be >= 1");
    if (cfg.workers > cfg.nodes) fail("WORKERS must be <= NODES");
    if (cfg.dissemination != 1 && cfg.dissemination != 2 && cfg.dissemination != 7)
        fail("DISSEMINATION must be one of 1 (broadcast), 2 (fixed probability), 7 (degree dependent)");
    if (cfg.dissemination == 7 && cfg.probability_function != 2)
        fail("PROBABILITY_FUNCTION: unknown function id " + std::to_string(cfg.probability_function));
    if (cfg.fixed_prob < 0.0 || cfg.fixed_prob > 1.0) fail("FIXED_PROB must be in [0, 1]");
    if (cfg.func_coeff_higher < 0.0) fail("FUNC_COEFF_HIGHER must be >= 0");
    if (cfg.func_coeff_lower < 0.0) fail("FUNC_COEFF_LOWER must be >= 0");
    if (cfg.tx.period < 1) fail("TX_PERIOD must be >= 1");
    if (cfg.tx.origin >= cfg.nodes) fail("TX_ORIGIN must be < NODES");
    if (cfg.attack.target >= cfg.nodes) fail("ATTACK_TARGET must be < NODES");
    if (cfg.attack.count > cfg.nodes - 1) fail("ATTACK_COUNT must be <= NODES - 1");
}

SimConfig parse_config(std::string_view text) {
    SimConfig cfg;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++lineno;

        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config error: line " + std::to_string(lineno) + ": expected KEY=VALUE");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config error: line " + std::to_string(lineno) + ": empty key");
        apply_config_kv(cfg, key, value);
    }
    validate_config(cfg);
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string render_config(const SimConfig& c) {
    std::ostringstream out;
    out << "TTL=" << c.ttl << '\n';
    out << "DISSEMINATION=" << c.dissemination << '\n';
    out << "PROBABILITY_FUNCTION=" << c.probability_function << '\n';
    out << "FUNC_COEFF_HIGHER=" << format_double(c.func_coeff_higher) << '\n';
    out << "FUNC_COEFF_LOWER=" << format_double(c.func_coeff_lower) << '\n';
    out << "END_CLOCK=" << c.end_clock << '\n';
    out << "NODES=" << c.nodes << '\n';
    out << "MINERS_COUNT=" << format_double(c.miners_percent) << '\n';
    out << "DIFFICULTY=" << format_double(c.difficulty) << '\n';
    out << "HASHRATE=" << format_double(c.total_hashrate) << '\n';
    out << "EDGES_PER_NODE=" << c.edges_per_node << '\n';
    out << "MASTER_SEED=" << c.master_seed << '\n';
    out << "WORKERS=" << c.workers << '\n';
    out << "FIXED_PROB=" << format_double(c.fixed_prob) << '\n';
    out << "MAX_BLOCK_TX=" << c.max_block_tx << '\n';
    out << "TX_ORIGIN=" << c.tx.origin << '\n';
    out << "TX_PERIOD=" << c.tx.period << '\n';
    out << "TX_COUNT=" << c.tx.count << '\n';
    out << "ATTACK_ENABLED=" << (c.attack.enabled ? 1 : 0) << '\n';
    out << "ATTACK_TARGET=" << c.attack.target << '\n';
    out << "ATTACK_COUNT=" << c.attack.count << '\n';
    out << "ATTACK_SEED=" << c.attack.seed << '\n';
    return out.str();
}

} // namespace chainsim
