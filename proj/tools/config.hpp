#pragma once

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace swingctl {

using Json = nlohmann::json;

/// Reads a TOML file, or JSON when the name ends in .json.
Json load_config(const std::string& path);

/// FNV-1a 64 over the canonical JSON dump.
std::uint64_t config_hash(const Json& config);

/// Read-only view of one table with typed accessors. Missing keys fall back
/// to the default; present keys of the wrong type raise a config error.
class Section {
public:
    Section(const Json& root, const std::string& name);

    bool has(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::string string(const std::string& key, const std::string& fallback) const;
    std::string string(const std::string& key) const;
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
    std::vector<std::string> strings(const std::string& key, std::vector<std::string> fallback) const;
    const Json& raw(const std::string& key) const;
    bool present() const noexcept { return table_ != nullptr; }

private:
    const Json* find(const std::string& key) const;
    [[noreturn]] void bad(const std::string& key, const char* want) const;

    std::string name_;
    const Json* table_ = nullptr;
};

/// Throws a config error for any table or key outside the schema.
void validate_schema(const Json& config);

} // namespace swingctl
