#include "nbmeans/grid_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string_view>
#include <vector>

#include "nbmeans/errors.hpp"
#include "nbmeans/results_csv.hpp"

namespace nbmeans {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> items;
    while (true) {
        const auto comma = s.find(',');
        const auto item = trim(s.substr(0, comma));
        if (item.empty()) throw ParseError("empty list item");
        items.push_back(item);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return items;
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("bad value '" + std::string(text) + "' for key '" + std::string(key) + "'");
    return value;
}

// Items are numbers or inclusive ranges start:stop:step.
template <typename T>
std::vector<T> parse_numeric_list(std::string_view value, std::string_view key) {
    std::vector<T> out;
    for (std::string_view item : split_list(value)) {
        const auto c1 = item.find(':');
        if (c1 == std::string_view::npos) {
            out.push_back(parse_number<T>(item, key));
            continue;
        }
        const auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string_view::npos)
            throw ParseError("range for '" + std::string(key) + "' must be start:stop:step");
        const T start = parse_number<T>(trim(item.substr(0, c1)), key);
        const T stop = parse_number<T>(trim(item.substr(c1 + 1, c2 - c1 - 1)), key);
        const T step = parse_number<T>(trim(item.substr(c2 + 1)), key);
        if (!(step > T{0}) || stop < start)
            throw ParseError("range for '" + std::string(key) + "' is empty or has a bad step");
        // Counted iteration keeps floating ranges free of accumulated drift.
        const auto steps = static_cast<std::size_t>((stop - start) / step + 1e-9);
        for (std::size_t i = 0; i <= steps; ++i)
            out.push_back(static_cast<T>(start + static_cast<T>(i) * step));
    }
    return out;
}

template <typename T>
T parse_scalar(std::string_view value, std::string_view key) {
    const auto items = split_list(value);
    if (items.size() != 1) throw ParseError("key '" + std::string(key) + "' takes one value");
    return parse_number<T>(items.front(), key);
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(values[i]);
        else
            out += std::to_string(values[i]);
    }
    return out;
}

} // namespace

GridSpec parse_grid_config(std::istream& in) {
    GridSpec grid;
    std::set<std::string, std::less<>> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key(trim(view.substr(0, eq)));
        const std::string_view value = trim(view.substr(eq + 1));
        if (value.empty())
            throw ParseError("line " + std::to_string(line_no) + ": key '" + key + "' has no value");
        if (!seen.insert(key).second)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

        try {
            if (key == "mu_x") grid.mu_x = parse_numeric_list<double>(value, key);
            else if (key == "mu_y") grid.mu_y = parse_numeric_list<double>(value, key);
            else if (key == "theta_x") grid.theta_x = parse_numeric_list<double>(value, key);
            else if (key == "theta_y") grid.theta_y = parse_numeric_list<double>(value, key);
            else if (key == "n_x") grid.n_x = parse_numeric_list<std::size_t>(value, key);
            else if (key == "n_y") grid.n_y = parse_numeric_list<std::size_t>(value, key);
            else if (key == "trials") grid.trials = parse_scalar<std::size_t>(value, key);
            else if (key == "alpha") grid.alpha = parse_scalar<double>(value, key);
            else if (key == "seed") grid.master_seed = parse_scalar<std::uint64_t>(value, key);
            else if (key == "mixture_weight") grid.mixture_weight = parse_scalar<double>(value, key);
            else if (key == "c_a") grid.c_a = parse_scalar<double>(value, key);
            else if (key == "c_b") grid.c_b = parse_scalar<double>(value, key);
            else if (key == "methods") {
                grid.methods.clear();
                for (auto item : split_list(value)) grid.methods.push_back(parse_method(item));
            } else if (key == "variance") {
                if (value == "sample") grid.variance_source = VarianceSource::Sample;
                else if (value == "population") grid.variance_source = VarianceSource::Population;
                else throw ParseError("variance must be 'sample' or 'population'");
            } else {
                throw ParseError("unknown key '" + key + "'");
            }
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    // Range checks; the expansion itself is cheap even for the full grid.
    (void)expand_grid(grid);
    return grid;
}

GridSpec load_grid_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path.string());
    return parse_grid_config(in);
}

std::string format_grid_config(const GridSpec& grid) {
    std::ostringstream out;
    out << "mu_x = " << join(grid.mu_x) << '\n'
        << "mu_y = " << join(grid.mu_y) << '\n'
        << "theta_x = " << join(grid.theta_x) << '\n'
        << "theta_y = " << join(grid.theta_y) << '\n'
        << "n_x = " << join(grid.n_x) << '\n'
        << "n_y = " << join(grid.n_y) << '\n'
        << "trials = " << grid.trials << '\n'
        << "alpha = " << format_double(grid.alpha) << '\n'
        << "seed = " << grid.master_seed << '\n'
        << "methods = ";
    for (std::size_t i = 0; i < grid.methods.size(); ++i)
        out << (i ? ", " : "") << to_string(grid.methods[i]);
    out << '\n'
        << "mixture_weight = " << format_double(grid.mixture_weight) << '\n'
        << "c_a = " << format_double(grid.c_a) << '\n'
        << "c_b = " << format_double(grid.c_b) << '\n'
        << "variance = "
        << (grid.variance_source == VarianceSource::Sample ? "sample" : "population") << '\n';
    return out.str();
}

} // namespace nbmeans
