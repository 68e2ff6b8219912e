#!/usr/bin/env python3
"""Regenerates the mini dataset and its mock scripts.

Expected outputs come from running the C programs (gcc); every Rust
reference is compiled with rustc and checked against them.

    python3 data/mini/make_mini.py
"""
import json
import pathlib
import subprocess
import sys
import tempfile

HERE = pathlib.Path(__file__).resolve().parent

JOBS = [
    ("sum_two", r'''#include <stdio.h>

int main() {
    int a, b;
    scanf("%d %d", &a, &b);
    printf("%d\n", a + b);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let a = it.next().unwrap();
    let b = it.next().unwrap();
    println!("{}", a + b);
}
''', ["1 2\n", "-5 5\n", "100 250\n"]),

    ("reverse_array", r'''#include <stdio.h>

int main() {
    int n, i;
    int a[1000];
    scanf("%d", &n);
    for (i = 0; i < n; i++) scanf("%d", &a[i]);
    for (i = n - 1; i >= 0; i--) printf("%d ", a[i]);
    printf("\n");
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let n = it.next().unwrap() as usize;
    let a: Vec<i32> = (0..n).map(|_| it.next().unwrap()).collect();
    let mut out = String::new();
    for x in a.iter().rev() {
        out.push_str(&format!("{} ", x));
    }
    println!("{}", out);
}
''', ["5\n1 2 3 4 5\n", "1\n42\n", "3\n-1 0 1\n"]),

    ("circular_shift", r'''#include <stdio.h>

int main() {
    int n, k, i;
    int a[100], b[100];
    scanf("%d %d", &n, &k);
    for (i = 0; i < n; i++) scanf("%d", &a[i]);
    for (i = 0; i < n; i++) {
        int j = i + k;
        while (j >= n) j -= n;
        b[i] = a[j];
    }
    for (i = 0; i < n; i++) printf("%d%c", b[i], i + 1 == n ? '\n' : ' ');
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i64>().unwrap());
    let n = it.next().unwrap() as usize;
    let k = it.next().unwrap() as usize;
    let a: Vec<i64> = (0..n).map(|_| it.next().unwrap()).collect();
    let mut b = vec![0i64; n];
    for i in 0..n {
        let mut j = i + k;
        while j >= n {
            j -= n;
        }
        b[i] = a[j];
    }
    let parts: Vec<String> = b.iter().map(|x| x.to_string()).collect();
    println!("{}", parts.join(" "));
}
''', ["5 2\n1 2 3 4 5\n", "3 7\n10 20 30\n", "4 0\n9 8 7 6\n"]),

    ("linked_sum", r'''#include <stdio.h>
#include <stdlib.h>

struct Node {
    int value;
    struct Node* next;
};

int main() {
    int n, i, x;
    struct Node* head = NULL;
    scanf("%d", &n);
    for (i = 0; i < n; i++) {
        scanf("%d", &x);
        struct Node* node = malloc(sizeof(struct Node));
        node->value = x;
        node->next = head;
        head = node;
    }
    long long total = 0;
    struct Node* cur = head;
    while (cur != NULL) {
        total += cur->value;
        printf("%d ", cur->value);
        cur = cur->next;
    }
    printf("\n%lld\n", total);
    while (head != NULL) {
        struct Node* next = head->next;
        free(head);
        head = next;
    }
    return 0;
}
''', r'''use std::io::{self, Read};

struct Node {
    value: i32,
    next: Option<Box<Node>>,
}

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let n = it.next().unwrap();
    let mut head: Option<Box<Node>> = None;
    for _ in 0..n {
        let x = it.next().unwrap();
        head = Some(Box::new(Node { value: x, next: head }));
    }
    let mut total: i64 = 0;
    let mut out = String::new();
    let mut cur = &head;
    while let Some(node) = cur {
        total += node.value as i64;
        out.push_str(&format!("{} ", node.value));
        cur = &node.next;
    }
    println!("{}", out);
    println!("{}", total);
}
''', ["3\n1 2 3\n", "1\n-7\n", "4\n1000000 2000000 3000000 4000000\n"]),

    ("dot_product", r'''#include <stdio.h>

int main() {
    int n, i, idx;
    int dp[200], dq[200];
    long long sum = 0;
    scanf("%d", &n);
    for (i = 0; i < n; i++) scanf("%d", &dp[i]);
    for (i = 0; i < n; i++) scanf("%d", &dq[i]);
    for (i = 0; i < n; i++) {
        idx = n - 1 - i;
        sum = sum + (long long) dp[i] * dq[idx];
    }
    printf("%lld\n", sum);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let n = it.next().unwrap() as usize;
    let dp: Vec<i32> = (0..n).map(|_| it.next().unwrap()).collect();
    let dq: Vec<i32> = (0..n).map(|_| it.next().unwrap()).collect();
    let mut sum: i64 = 0;
    for i in 0..n {
        let idx = n - 1 - i;
        sum += dp[i] as i64 * dq[idx] as i64;
    }
    println!("{}", sum);
}
''', ["3\n1 2 3\n4 5 6\n", "2\n2000000000 2000000000\n2000000000 2000000000\n", "1\n-3\n7\n"]),

    ("parity_dp", r'''#include <stdio.h>

int main() {
    int n, i;
    int dp[100][2];
    scanf("%d", &n);
    dp[0][0] = 1;
    dp[0][1] = 0;
    for (i = 1; i <= n; i++) {
        dp[i][0] = (dp[i - 1][0] + dp[i - 1][1]) % 1000007;
        dp[i][1] = (dp[i - 1][0] * 2 + dp[i - 1][1]) % 1000007;
    }
    printf("%d %d\n", dp[n][0], dp[n][1]);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let n: usize = input.trim().parse().unwrap();
    let mut dp = [[0i64; 2]; 100];
    dp[0][0] = 1;
    dp[0][1] = 0;
    for i in 1..=n {
        dp[i][0] = (dp[i - 1][0] + dp[i - 1][1]) % 1000007;
        dp[i][1] = (dp[i - 1][0] * 2 + dp[i - 1][1]) % 1000007;
    }
    println!("{} {}", dp[n][0], dp[n][1]);
}
''', ["1\n", "10\n", "60\n"]),

    ("reverse_word", r'''#include <stdio.h>
#include <string.h>

int main() {
    char s[256];
    int len, i;
    scanf("%255s", s);
    len = strlen(s);
    for (i = len - 1; i >= 0; i--) putchar(s[i]);
    putchar('\n');
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let word = input.split_whitespace().next().unwrap_or("");
    let reversed: String = word.chars().rev().collect();
    println!("{}", reversed);
}
''', ["hello\n", "a\n", "racecar\n"]),

    ("gcd_pairs", r'''#include <stdio.h>

int gcd(int a, int b) {
    while (b != 0) {
        int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

int main() {
    int t, a, b;
    scanf("%d", &t);
    while (t--) {
        scanf("%d %d", &a, &b);
        printf("%d\n", gcd(a, b));
    }
    return 0;
}
''', r'''use std::io::{self, Read};

fn gcd(mut a: i32, mut b: i32) -> i32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let t = it.next().unwrap();
    let mut out = String::new();
    for _ in 0..t {
        let a = it.next().unwrap();
        let b = it.next().unwrap();
        out.push_str(&format!("{}\n", gcd(a, b)));
    }
    print!("{}", out);
}
''', ["3\n12 18\n7 13\n100 75\n", "1\n5 0\n"]),

    ("prime_count", r'''#include <stdio.h>
#include <stdlib.h>

int main() {
    int n, i, j, count = 0;
    scanf("%d", &n);
    char *composite = calloc(n + 1, sizeof(char));
    for (i = 2; i <= n; i++) {
        if (!composite[i]) {
            count++;
            for (j = i * 2; j <= n; j += i) composite[j] = 1;
        }
    }
    printf("%d\n", count);
    free(composite);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let n: usize = input.trim().parse().unwrap();
    let mut composite = vec![false; n + 1];
    let mut count = 0;
    for i in 2..=n {
        if !composite[i] {
            count += 1;
            let mut j = i * 2;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    println!("{}", count);
}
''', ["10\n", "1\n", "1000\n"]),

    ("max_subarray", r'''#include <stdio.h>

int main() {
    int n, i, x;
    long long best, cur;
    scanf("%d", &n);
    scanf("%d", &x);
    best = x;
    cur = x;
    for (i = 1; i < n; i++) {
        scanf("%d", &x);
        if (cur < 0) cur = x;
        else cur = cur + x;
        if (cur > best) best = cur;
    }
    printf("%lld\n", best);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i64>().unwrap());
    let n = it.next().unwrap() as usize;
    let first = it.next().unwrap();
    let mut best = first;
    let mut cur = first;
    for _ in 1..n {
        let x = it.next().unwrap();
        if cur < 0 {
            cur = x;
        } else {
            cur += x;
        }
        if cur > best {
            best = cur;
        }
    }
    println!("{}", best);
}
''', ["5\n-2 1 -3 4 -1\n", "3\n-5 -1 -7\n", "4\n2000000000 2000000000 -1 5\n"]),
]

# Demonstration pool for the mini corpus (translated by an echoing mock
# during build-corpus). The last item duplicates a dataset program and is
# removed by the leakage filter.
CORPUS_RAW = [
    ("demo_read_print", r'''#include <stdio.h>
int main() {
    int n;
    scanf("%d", &n);
    printf("%d\n", n * 2);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let n: i32 = input.trim().parse().unwrap();
    println!("{}", n * 2);
}
'''),
    ("demo_box_node", r'''#include <stdlib.h>
struct Node { int v; struct Node* next; };
int main() {
    struct Node* n = malloc(sizeof(struct Node));
    n->v = 1;
    n->next = NULL;
    free(n);
    return 0;
}
''', r'''#[derive(Default)]
struct Node {
    v: i32,
    next: Option<Box<Node>>,
}

fn main() {
    let mut n = Box::new(Node::default());
    n.v = 1;
    n.next = None;
    let _ = (n.v, n.next.is_none());
}
'''),
    ("demo_array_sum", r'''#include <stdio.h>
int main() {
    int a[50], n, i, s = 0;
    scanf("%d", &n);
    for (i = 0; i < n; i++) { scanf("%d", &a[i]); s += a[i]; }
    printf("%d\n", s);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let n = it.next().unwrap() as usize;
    let mut a = [0i32; 50];
    let mut s = 0;
    for i in 0..n {
        a[i] = it.next().unwrap();
        s += a[i];
    }
    println!("{}", s);
}
'''),
    ("demo_widen", r'''#include <stdio.h>
int main() {
    int a, b;
    long long p;
    scanf("%d %d", &a, &b);
    p = (long long) a * b;
    printf("%lld\n", p);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let mut it = input.split_whitespace().map(|t| t.parse::<i32>().unwrap());
    let a = it.next().unwrap();
    let b = it.next().unwrap();
    let p = a as i64 * b as i64;
    println!("{}", p);
}
'''),
    ("demo_vec_alloc", r'''#include <stdio.h>
#include <stdlib.h>
int main() {
    int n, i;
    scanf("%d", &n);
    int *arr = malloc(n * sizeof(int));
    for (i = 0; i < n; i++) arr[i] = i * i;
    printf("%d\n", arr[n - 1]);
    free(arr);
    return 0;
}
''', r'''use std::io::{self, Read};

fn main() {
    let mut input = String::new();
    io::stdin().read_to_string(&mut input).unwrap();
    let n: usize = input.trim().parse().unwrap();
    let mut arr: Vec<i32> = Vec::with_capacity(n);
    for i in 0..n {
        arr.push((i * i) as i32);
    }
    println!("{}", arr[n - 1]);
}
'''),
]

SUMMARY_KEY = "structured summary with exactly three labeled sections"
SUMMARY_REPLY = ("Input: integers read from standard input as described by the program\n"
                 "Output: the computed values printed to standard output\n"
                 "Functionality: reads the input, computes the result exactly as the C code does "
                 "(including any circular manner of indexing), and prints it")


def run(cmd, stdin="", cwd=None):
    return subprocess.run(cmd, input=stdin, capture_output=True, text=True, cwd=cwd, timeout=60, check=True).stdout


def fence(code):
    return "```rust\n" + code.rstrip("\n") + "\n```"


def main():
    dataset = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        for job_id, c_code, rust, inputs in JOBS:
            (tmp / "p.c").write_text(c_code)
            (tmp / "p.rs").write_text(rust)
            run(["gcc", "-O2", "-w", "-o", "c_bin", "p.c"], cwd=tmp)
            run(["rustc", "--edition", "2021", "-o", "r_bin", "p.rs"], cwd=tmp)
            cases = []
            for stdin in inputs:
                expected = run([str(tmp / "c_bin")], stdin)
                got = run([str(tmp / "r_bin")], stdin)
                norm = lambda s: "\n".join(l.rstrip() for l in s.split("\n")).rstrip("\n")
                if norm(expected) != norm(got):
                    sys.exit(f"{job_id}: reference disagrees with C on {stdin!r}: {expected!r} vs {got!r}")
                cases.append({"input": stdin, "expected": expected})
            dataset.append({"id": job_id, "c_code": c_code, "test_cases": cases, "reference_rust": rust})

        for demo_id, c_code, rust in CORPUS_RAW:
            (tmp / "d.rs").write_text(rust)
            run(["rustc", "--edition", "2021", "-o", "d_bin", "d.rs"], cwd=tmp)

    with open(HERE / "dataset.jsonl", "w") as f:
        for job in dataset:
            f.write(json.dumps(job) + "\n")

    # Irene-mode echo: the summary request is matched by a phrase only the
    # summary template contains; translation requests by the job's C code.
    table = [{"key": SUMMARY_KEY, "response": SUMMARY_REPLY}]
    table += [{"key": job["c_code"], "response": "Here is the translation.\n\n" + fence(job["reference_rust"])}
              for job in dataset]
    (HERE / "mock_echo.json").write_text(json.dumps({"table": table}, indent=2) + "\n")

    raw = [{"id": d, "c_code": c} for d, c, _ in CORPUS_RAW]
    raw.append({"id": "demo_leaked", "c_code": JOBS[0][1]})
    with open(HERE / "corpus_raw.jsonl", "w") as f:
        for item in raw:
            f.write(json.dumps(item) + "\n")
    corpus_table = [{"key": c, "response": fence(r)} for _, c, r in CORPUS_RAW]
    (HERE / "corpus_mock.json").write_text(json.dumps({"table": corpus_table}, indent=2) + "\n")
    print(f"wrote {len(dataset)} jobs, {len(raw)} raw corpus items")


if __name__ == "__main__":
    main()
