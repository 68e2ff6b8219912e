fn main() {
    let s = "unsafe";
    println!("{}", s);
}
