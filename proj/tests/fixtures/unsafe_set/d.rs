/* unsafe { } */
fn main() {
    let r = r#"unsafe { }"#;
    println!("{}", r);
}
