fn main() {
    let x: i32 = 5;
    let p = &x as *const i32;

    let y = unsafe {
        *p + 1
    };
    // doubled below
    println!("{}", y);
    let z = y * 2;
    println!("{}", z);
}
