#include "rplab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rplab/error.hpp"

namespace rplab
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
    {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text)
{
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
        {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty())
        {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw Error(ErrorKind::InvalidConfig,
                        "line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
        {
            throw Error(ErrorKind::InvalidConfig, "line " + std::to_string(lineno) + ": empty key");
        }
        cfg.values_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Error(ErrorKind::Io, "cannot open config file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
    {
        return fallback;
    }
    try
    {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size())
        {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    }
    catch (const std::exception&)
    {
        throw Error(ErrorKind::InvalidConfig, "key '" + key + "': not a number: " + it->second);
    }
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
    {
        return fallback;
    }
    try
    {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size())
        {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    }
    catch (const std::exception&)
    {
        throw Error(ErrorKind::InvalidConfig, "key '" + key + "': not an integer: " + it->second);
    }
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
    {
        return fallback;
    }
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on")
    {
        return true;
    }
    if (v == "false" || v == "0" || v == "no" || v == "off")
    {
        return false;
    }
    throw Error(ErrorKind::InvalidConfig, "key '" + key + "': not a boolean: " + v);
}

std::vector<double> KeyValueConfig::get_list(const std::string& key,
                                             const std::vector<double>& fallback) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
    {
        return fallback;
    }
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ','))
    {
        item = trim(item);
        if (item.empty())
        {
            continue;
        }
        try
        {
            out.push_back(std::stod(item));
        }
        catch (const std::exception&)
        {
            throw Error(ErrorKind::InvalidConfig, "key '" + key + "': bad list entry: " + item);
        }
    }
    return out;
}

std::string KeyValueConfig::canonical() const
{
    std::string out;
    for (const auto& [k, v] : values_)
    {
        out += k + " = " + v + "\n";
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string KeyValueConfig::hash() const
{
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

} // namespace rplab
