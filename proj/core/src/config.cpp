#include "repage/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace repage {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw std::invalid_argument("config key '" + std::string(key) + "': invalid value '" +
                                std::string(value) + "'");
}

double parse_double(std::string_view key, std::string_view value) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

int parse_int(std::string_view key, std::string_view value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(key, value);
    return out;
}

}  // namespace

QualityDistSpec parse_quality_dist(std::string_view text) {
    QualityDistSpec spec;
    auto colon = text.find(':');
    std::string_view name = text.substr(0, colon);
    std::string_view args = colon == std::string_view::npos ? "" : text.substr(colon + 1);
    auto split_pair = [&](double& a, double& b) {
        auto comma = args.find(',');
        if (comma == std::string_view::npos) bad_value("quality_distribution", text);
        a = parse_double("quality_distribution", trim(args.substr(0, comma)));
        b = parse_double("quality_distribution", trim(args.substr(comma + 1)));
    };
    if (name == "uniform") {
        spec.kind = QualityDistSpec::Kind::UniformInt;
        if (!args.empty()) split_pair(spec.lo, spec.hi);
    } else if (name == "point") {
        spec.kind = QualityDistSpec::Kind::Point;
        if (args.empty()) bad_value("quality_distribution", text);
        spec.value = parse_double("quality_distribution", args);
    } else if (name == "normal") {
        spec.kind = QualityDistSpec::Kind::NormalTruncated;
        if (args.empty()) bad_value("quality_distribution", text);
        split_pair(spec.mean, spec.stddev);
    } else {
        bad_value("quality_distribution", text);
    }
    return spec;
}

std::string to_string(const QualityDistSpec& spec) {
    char buf[96];
    switch (spec.kind) {
        case QualityDistSpec::Kind::UniformInt:
            std::snprintf(buf, sizeof buf, "uniform:%g,%g", spec.lo, spec.hi);
            break;
        case QualityDistSpec::Kind::Point:
            std::snprintf(buf, sizeof buf, "point:%g", spec.value);
            break;
        case QualityDistSpec::Kind::NormalTruncated:
            std::snprintf(buf, sizeof buf, "normal:%g,%g", spec.mean, spec.stddev);
            break;
    }
    return buf;
}

ScenarioLevel parse_level(std::string_view text) {
    if (text == "L1" || text == "l1" || text == "1") return ScenarioLevel::L1;
    if (text == "L2" || text == "l2" || text == "2") return ScenarioLevel::L2;
    bad_value("level", text);
}

void apply_config_entry(SimConfig& config, std::string_view key, std::string_view value) {
    if (key == "n_sellers") config.n_sellers = parse_int(key, value);
    else if (key == "n_buyers") config.n_buyers = parse_int(key, value);
    else if (key == "turns") config.turns = parse_int(key, value);
    else if (key == "level") config.level = parse_level(value);
    else if (key == "cheater_fraction") config.cheater_fraction = parse_double(key, value);
    else if (key == "stock") config.stock = parse_int(key, value);
    else if (key == "epsilon") config.epsilon = parse_double(key, value);
    else if (key == "idk_threshold") config.idk_threshold = parse_double(key, value);
    else if (key == "question_split") config.question_split = parse_double(key, value);
    else if (key == "optimism_prior") config.optimism_prior = parse_double(key, value);
    else if (key == "good_seller_threshold")
        config.good_seller_threshold = parse_double(key, value);
    else if (key == "quality_distribution") config.quality_dist = parse_quality_dist(value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else
        throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

SimConfig parse_config_text(std::string_view text, const SimConfig& base) {
    SimConfig config = base;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        std::string_view key = trim(line.substr(0, eq));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        if (!seen.insert(std::string(key)).second)
            throw std::invalid_argument("duplicate config key '" + std::string(key) + "'");
        apply_config_entry(config, key, value);
    }
    return config;
}

SimConfig load_config_file(const std::string& path, const SimConfig& base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), base);
}

}  // namespace repage
