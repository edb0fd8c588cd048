#ifndef RPLAB_CONFIG_HPP
#define RPLAB_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rplab
{

///
/// Flat `key = value` configuration. Lines starting with `#` are comments;
/// keys are case-sensitive; later assignments override earlier ones.
///
class KeyValueConfig
{
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const
    {
        return values_.count(key) != 0;
    }

    void set(const std::string& key, const std::string& value)
    {
        values_[key] = value;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const
    {
        return values_;
    }

    /// Canonical `key = value` rendering (sorted keys); stable across runs.
    std::string canonical() const;

    /// FNV-1a 64-bit hash of canonical(), as 16 hex digits.
    std::string hash() const;

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a64(const std::string& text);

} // namespace rplab

#endif // RPLAB_CONFIG_HPP
