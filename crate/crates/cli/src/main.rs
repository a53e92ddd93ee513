fn main() {
    println!("isolab");
}
