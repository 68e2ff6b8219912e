// unsafe is only mentioned here
fn main() {
    println!("b");
}
