#include "c2r/metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "c2r/error.hpp"
#include "c2r/util/process.hpp"

namespace c2r::metrics {

ExecResult run_program(const std::filesystem::path& executable, const std::string& stdin_text,
                       std::chrono::milliseconds timeout) {
    util::ProcessSpec spec;
    spec.argv = {executable.string()};
    spec.cwd = executable.parent_path();
    spec.stdin_text = stdin_text;
    spec.timeout = timeout;
    util::ProcessSlot slot(util::ProcessLimiter::global());
    const auto r = util::run_process(spec);
    return ExecResult{r.stdout_text, r.exit_code, r.timed_out, r.duration};
}

std::string normalize_output(std::string_view text) {
    std::string out;
    std::size_t pending_newlines = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r' ||
                                 line.back() == '\f' || line.back() == '\v'))
            line.remove_suffix(1);
        if (line.empty()) {
            ++pending_newlines;
        } else {
            if (!out.empty() || pending_newlines) out.append(pending_newlines + (out.empty() ? 0 : 1), '\n');
            out.append(line);
            pending_newlines = 0;
        }
        if (eol == text.size()) break;
        pos = eol + 1;
    }
    return out;
}

std::optional<int> ca_one(std::span<const ExecResult> results, std::span<const translator::TestCase> cases) {
    if (cases.empty()) return std::nullopt;
    if (results.size() != cases.size()) throw std::invalid_argument("ca_one: one result per test case required");
    for (std::size_t i = 0; i < cases.size(); ++i) {
        if (results[i].timed_out) return 0;
        if (normalize_output(results[i].stdout_text) != normalize_output(cases[i].expected)) return 0;
    }
    return 1;
}

std::optional<int> evaluate_executable(const std::filesystem::path& executable,
                                       std::span<const translator::TestCase> cases,
                                       std::chrono::milliseconds timeout) {
    if (cases.empty()) return std::nullopt;
    for (const auto& tc : cases) {
        const ExecResult r = run_program(executable, tc.input, timeout);
        if (r.timed_out || normalize_output(r.stdout_text) != normalize_output(tc.expected)) return 0;
    }
    return 1;
}

// ---- unsafe scanner ---------------------------------------------------------------

namespace {

struct Tok {
    enum Kind { Ident, Open, Close, Semi } kind;
    std::string_view text;
    int line;
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || (c & 0x80); }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

class RustScanner {
public:
    explicit RustScanner(std::string_view s) : s_(s) {
        std::size_t lines = 1;
        for (char c : s) lines += c == '\n';
        code_line_.assign(lines + 1, false);
    }

    void run() {
        while (i_ < s_.size()) step();
    }

    std::vector<Tok> tokens;
    std::vector<bool> code_line_;  // 1-based

private:
    char at(std::size_t k) const { return k < s_.size() ? s_[k] : '\0'; }
    void mark(int line) { code_line_[static_cast<std::size_t>(line)] = true; }
    void advance() {
        if (s_[i_] == '\n') ++line_;
        ++i_;
    }
    void mark_range_to_current(int from) {
        for (int l = from; l <= line_; ++l) mark(l);
    }

    void step() {
        const char c = s_[i_];
        if (c == '\n' || c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
            advance();
            return;
        }
        if (c == '/' && at(i_ + 1) == '/') {
            while (i_ < s_.size() && s_[i_] != '\n') ++i_;
            return;
        }
        if (c == '/' && at(i_ + 1) == '*') {
            block_comment();
            return;
        }
        if (c == '"') {
            quoted_string();
            return;
        }
        if (c == '\'') {
            quote();
            return;
        }
        if (ident_start(c)) {
            if (literal_prefix()) return;
            const std::size_t start = i_;
            while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
            mark(line_);
            tokens.push_back({Tok::Ident, s_.substr(start, i_ - start), line_});
            return;
        }
        if (c >= '0' && c <= '9') {
            while (i_ < s_.size() && (ident_char(s_[i_]) || s_[i_] == '.') &&
                   !(s_[i_] == '.' && at(i_ + 1) == '.'))
                ++i_;
            mark(line_);
            return;
        }
        mark(line_);
        if (c == '{') tokens.push_back({Tok::Open, {}, line_});
        else if (c == '}') tokens.push_back({Tok::Close, {}, line_});
        else if (c == ';') tokens.push_back({Tok::Semi, {}, line_});
        ++i_;
    }

    void block_comment() {
        int depth = 0;
        while (i_ < s_.size()) {
            if (s_[i_] == '/' && at(i_ + 1) == '*') {
                ++depth;
                i_ += 2;
            } else if (s_[i_] == '*' && at(i_ + 1) == '/') {
                --depth;
                i_ += 2;
                if (depth == 0) return;
            } else {
                advance();
            }
        }
    }

    // At the opening quote of a "..." literal with escapes.
    void quoted_string() {
        const int from = line_;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\' && i_ + 1 < s_.size()) advance();
            advance();
        }
        if (i_ < s_.size()) ++i_;
        mark_range_to_current(from);
    }

    // At r / br / cr with i_ on the 'r'.
    void raw_string() {
        const int from = line_;
        ++i_;  // r
        std::size_t hashes = 0;
        while (at(i_) == '#') {
            ++hashes;
            ++i_;
        }
        ++i_;  // opening quote
        while (i_ < s_.size()) {
            if (s_[i_] == '"') {
                std::size_t k = 0;
                while (k < hashes && at(i_ + 1 + k) == '#') ++k;
                if (k == hashes) {
                    i_ += 1 + hashes;
                    break;
                }
            }
            advance();
        }
        mark_range_to_current(from);
    }

    bool raw_string_ahead(std::size_t k) const {
        while (at(k) == '#') ++k;
        return at(k) == '"';
    }

    // String/char literals with b, br, c, cr prefixes and raw identifiers.
    bool literal_prefix() {
        const char c = s_[i_];
        if (c == 'r' && at(i_ + 1) == '#' && ident_start(at(i_ + 2))) {
            i_ += 2;  // raw identifier: never a keyword
            while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
            mark(line_);
            return true;
        }
        if (c == 'r' && raw_string_ahead(i_ + 1)) {
            raw_string();
            return true;
        }
        if ((c == 'b' || c == 'c') && at(i_ + 1) == 'r' && raw_string_ahead(i_ + 2)) {
            ++i_;
            raw_string();
            return true;
        }
        if ((c == 'b' || c == 'c') && at(i_ + 1) == '"') {
            ++i_;
            quoted_string();
            return true;
        }
        if (c == 'b' && at(i_ + 1) == '\'') {
            ++i_;
            quote();
            return true;
        }
        return false;
    }

    // Char literal or lifetime/label.
    void quote() {
        mark(line_);
        std::size_t k = i_ + 1;
        if (at(k) == '\\') {
            k += 2;
            while (k < s_.size() && s_[k] != '\'' && s_[k] != '\n') ++k;
            i_ = k < s_.size() && s_[k] == '\'' ? k + 1 : k;
            return;
        }
        // One code point then a closing quote: char literal.
        std::size_t cp = 1;
        const unsigned char lead = static_cast<unsigned char>(at(k));
        if (lead >= 0xF0) cp = 4;
        else if (lead >= 0xE0) cp = 3;
        else if (lead >= 0xC0) cp = 2;
        if (at(k) != '\n' && at(k + cp) == '\'') {
            i_ = k + cp + 1;
            return;
        }
        // Lifetime: the identifier that follows is not a keyword use.
        i_ = k;
        while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    }

    std::string_view s_;
    std::size_t i_ = 0;
    int line_ = 1;
};

}  // namespace

UnsafeScan scan_unsafe(std::string_view rust_code) {
    RustScanner scanner(rust_code);
    scanner.run();
    const auto& toks = scanner.tokens;
    const int last_line = static_cast<int>(scanner.code_line_.size()) - 1;

    std::vector<std::pair<int, int>> raw;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i].kind != Tok::Ident || toks[i].text != "unsafe") continue;
        int end = last_line;
        for (std::size_t j = i + 1; j < toks.size(); ++j) {
            if (toks[j].kind == Tok::Semi) {
                end = toks[j].line;
                break;
            }
            if (toks[j].kind != Tok::Open) continue;
            int depth = 0;
            std::size_t m = j;
            for (; m < toks.size(); ++m) {
                if (toks[m].kind == Tok::Open) ++depth;
                else if (toks[m].kind == Tok::Close && --depth == 0) break;
            }
            end = m < toks.size() ? toks[m].line : last_line;
            break;
        }
        raw.emplace_back(toks[i].line, end);
    }
    std::sort(raw.begin(), raw.end());

    UnsafeScan scan;
    for (const auto& r : raw) {
        if (!scan.regions.empty() && r.first <= scan.regions.back().second) {
            scan.regions.back().second = std::max(scan.regions.back().second, r.second);
        } else {
            scan.regions.push_back(r);
        }
    }
    for (int l = 1; l <= last_line; ++l) scan.total_code_lines += scanner.code_line_[static_cast<std::size_t>(l)];
    for (const auto& [a, b] : scan.regions)
        for (int l = a; l <= b; ++l) scan.unsafe_lines += scanner.code_line_[static_cast<std::size_t>(l)];
    return scan;
}

// ---- aggregation ------------------------------------------------------------------

JobRow make_row(std::string id, bool compiled, std::optional<int> ca, const UnsafeScan& scan, int iterations_used,
                std::string error) {
    JobRow row;
    row.id = std::move(id);
    row.compiled = compiled;
    row.ca = compiled ? ca : (ca ? std::optional<int>(0) : std::nullopt);
    row.total_code_lines = scan.total_code_lines;
    row.unsafe_lines = scan.unsafe_lines;
    row.unsafe_line_ratio = 100.0 * scan.ratio();
    row.iterations_used = iterations_used;
    row.error = std::move(error);
    return row;
}

MetricsReport aggregate(std::span<const JobRow> rows) {
    if (rows.empty()) throw EmptyDataset();
    MetricsReport r;
    r.rows.assign(rows.begin(), rows.end());
    r.n_jobs = rows.size();
    std::size_t ca_sum = 0, compiled = 0, unsafe_samples = 0;
    double ratio_sum = 0.0;
    for (const auto& row : rows) {
        if (row.ca) {
            ++r.ca_eligible;
            ca_sum += *row.ca == 1;
        }
        compiled += row.compiled;
        unsafe_samples += row.unsafe_lines > 0;
        ratio_sum += row.unsafe_line_ratio;
    }
    const double n = static_cast<double>(r.n_jobs);
    r.ca = r.ca_eligible ? 100.0 * static_cast<double>(ca_sum) / static_cast<double>(r.ca_eligible) : 0.0;
    r.csr = 100.0 * static_cast<double>(compiled) / n;
    r.ur = 100.0 * static_cast<double>(unsafe_samples) / n;
    r.ulr = ratio_sum / n;
    return r;
}

nlohmann::json to_json(const MetricsReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"id", row.id},
                        {"compiled", row.compiled},
                        {"ca", row.ca ? nlohmann::json(*row.ca) : nlohmann::json(nullptr)},
                        {"total_code_lines", row.total_code_lines},
                        {"unsafe_lines", row.unsafe_lines},
                        {"unsafe_line_ratio", row.unsafe_line_ratio},
                        {"iterations_used", row.iterations_used},
                        {"error", row.error}});
    return {{"n_jobs", report.n_jobs}, {"ca_eligible", report.ca_eligible},
            {"ca", report.ca},         {"csr", report.csr},
            {"ur", report.ur},         {"ulr", report.ulr},
            {"rows", rows}};
}

MetricsReport report_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array())
        throw MalformedRecord("report has no \"rows\" array", 1);
    std::vector<JobRow> rows;
    std::size_t index = 0;
    for (const auto& r : j["rows"]) {
        ++index;
        try {
            JobRow row;
            row.id = r.at("id").get<std::string>();
            row.compiled = r.at("compiled").get<bool>();
            if (!r.at("ca").is_null()) row.ca = r["ca"].get<int>();
            row.total_code_lines = r.at("total_code_lines").get<std::size_t>();
            row.unsafe_lines = r.at("unsafe_lines").get<std::size_t>();
            row.unsafe_line_ratio = r.at("unsafe_line_ratio").get<double>();
            row.iterations_used = r.at("iterations_used").get<int>();
            row.error = r.value("error", std::string());
            rows.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw MalformedRecord(std::string("report row ") + std::to_string(index) + ": " + e.what(), 1);
        }
    }
    return aggregate(rows);
}

namespace {

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pad(std::string s, std::size_t width, bool right = false) {
    if (s.size() >= width) return s;
    return right ? std::string(width - s.size(), ' ') + s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string render_text(const MetricsReport& report) {
    std::size_t id_width = 2;
    for (const auto& row : report.rows) id_width = std::max(id_width, row.id.size());
    std::string out = pad("id", id_width) + "  compiled  ca  unsafe_lines  ulr%    iters  error\n";
    for (const auto& row : report.rows) {
        out += pad(row.id, id_width) + "  " + pad(row.compiled ? "yes" : "no", 8) + "  " +
               pad(row.ca ? std::to_string(*row.ca) : "-", 2) + "  " +
               pad(std::to_string(row.unsafe_lines) + "/" + std::to_string(row.total_code_lines), 12) + "  " +
               pad(fixed2(row.unsafe_line_ratio), 6, true) + "  " + pad(std::to_string(row.iterations_used), 5) +
               "  " + row.error + "\n";
        while (out.size() > 1 && out[out.size() - 2] == ' ') out.erase(out.size() - 2, 1);
    }
    out += "\njobs: " + std::to_string(report.n_jobs) + " (CA over " + std::to_string(report.ca_eligible) + ")\n";
    out += "CA:  " + pad(fixed2(report.ca), 6, true) + "\n";
    out += "CSR: " + pad(fixed2(report.csr), 6, true) + "\n";
    out += "UR:  " + pad(fixed2(report.ur), 6, true) + "\n";
    out += "ULR: " + pad(fixed2(report.ulr), 6, true) + "\n";
    return out;
}

std::string sweep_csv(std::span<const std::pair<int, MetricsReport>> sweep) {
    std::string out = "iterations,n_jobs,ca,csr,ur,ulr\n";
    for (const auto& [iterations, r] : sweep)
        out += std::to_string(iterations) + "," + std::to_string(r.n_jobs) + "," + fixed2(r.ca) + "," +
               fixed2(r.csr) + "," + fixed2(r.ur) + "," + fixed2(r.ulr) + "\n";
    return out;
}

}  // namespace c2r::metrics
