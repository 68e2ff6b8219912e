#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

namespace c2r::test {

// A generated Rust-like program with the truth recorded while writing it.
struct GeneratedProgram {
    std::string text;
    std::size_t code_lines = 0;
    std::size_t unsafe_lines = 0;
    std::vector<std::pair<int, int>> regions;
};

class UnsafeProgramBuilder {
public:
    explicit UnsafeProgramBuilder(std::uint64_t seed) : rng_(seed) {}

    GeneratedProgram build() {
        prog_ = {};
        line_ = 0;
        code("fn main() {");
        const int units = 1 + static_cast<int>(rng_() % 14);
        for (int u = 0; u < units; ++u) unit();
        code("}");
        if (rng_() % 3 == 0) trailing_item();
        return prog_;
    }

private:
    void emit(const std::string& s, bool is_code) {
        prog_.text += s;
        prog_.text += '\n';
        ++line_;
        if (is_code) {
            ++prog_.code_lines;
            if (in_region_) ++prog_.unsafe_lines;
        }
    }
    void code(const std::string& s) { emit(s, true); }
    void noncode(const std::string& s) { emit(s, false); }
    std::string n() { return std::to_string(rng_() % 1000); }

    void open_region() {
        in_region_ = true;
        region_start_ = line_ + 1;
    }
    void close_region() {
        in_region_ = false;
        prog_.regions.emplace_back(region_start_, line_);
    }

    // Lines that mention unsafe without being unsafe code.
    void decoy() {
        switch (rng_() % 14) {
            case 0: code("    let s = \"unsafe { *p }\";"); break;
            case 1: code("    let s = \"escaped \\\" unsafe { \\\" still string\";"); break;
            case 2: code("    let r = r#\"unsafe \"quoted\" { \"#;"); break;
            case 3: code("    let r = r##\"a \"# unsafe { \"##;"); break;
            case 4: noncode("    // unsafe { this is a comment }"); break;
            case 5: noncode("    /// unsafe docs"); break;
            case 6: noncode("    /* unsafe /* nested unsafe { */ still comment } */"); break;
            case 7:
                noncode("    /* unsafe {");
                noncode("       /* nested */ unsafe again");
                noncode("    */");
                break;
            case 8:
                code("    let m = r\"line one");
                code("unsafe { inside raw");
                code("\";");
                break;
            case 9: code("    let unsafe_count = " + n() + "; let not_unsafe = unsafe_count;"); break;
            case 10: code("    let c = '{'; let d = '}'; let q = '\\'';"); break;
            case 11: code("    let b = b\"unsafe\"; let br = br#\"unsafe {\"#;"); break;
            case 12: code("    let r#unsafe = " + n() + ";"); break;
            default: code("    let t = \"}\"; // unsafe } in trailing comment"); break;
        }
    }

    void plain() {
        switch (rng_() % 6) {
            case 0: code("    let x" + n() + " = " + n() + " + 1;"); break;
            case 1: noncode(""); break;
            case 2: noncode("    // note " + n()); break;
            case 3: code("    fn id<'a>(x: &'a str) -> &'a str { x }"); break;
            case 4: code("    if true { let _ = " + n() + "; }"); break;
            default: code("    println!(\"{}\", " + n() + ");"); break;
        }
    }

    void block_body(int depth) {
        const int lines = static_cast<int>(rng_() % 5);
        for (int i = 0; i < lines; ++i) {
            switch (rng_() % 7) {
                case 0: code("        *p.add(" + n() + ")"); break;
                case 1: noncode("        // inside"); break;
                case 2: noncode(""); break;
                case 3: code("        let s = \"}}}\";"); break;
                case 4:
                    if (depth < 2) {
                        code("        {");
                        block_body(depth + 1);
                        code("        }");
                    } else {
                        code("        let y = 1;");
                    }
                    break;
                case 5: code("        let z = unsafe { *q };"); break;
                default: decoy(); break;
            }
        }
    }

    void unsafe_unit() {
        switch (rng_() % 5) {
            case 0:
                open_region();
                code("    let v = unsafe { *p };");
                close_region();
                break;
            case 1:
                open_region();
                code("    let v = unsafe {");
                block_body(0);
                code("    };");
                close_region();
                break;
            case 2:
                open_region();
                code("    unsafe fn raw" + n() + "(p: *const i32) -> i32");
                code("    {");
                block_body(0);
                code("    }");
                close_region();
                break;
            case 3:
                open_region();
                code("    unsafe impl Send for S {}");
                close_region();
                break;
            default:
                open_region();
                code("    unsafe { f(); } unsafe { g(); }");
                close_region();
                break;
        }
    }

    void unit() {
        const auto r = rng_() % 10;
        if (r < 3) unsafe_unit();
        else if (r < 7) decoy();
        else plain();
    }

    void trailing_item() {
        open_region();
        code("unsafe extern \"C\" {");
        code("    fn abs(x: i32) -> i32;");
        code("}");
        close_region();
    }

    std::mt19937_64 rng_;
    GeneratedProgram prog_;
    int line_ = 0;
    bool in_region_ = false;
    int region_start_ = 0;
};

}  // namespace c2r::test
