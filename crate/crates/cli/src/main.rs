fn main() { println!("tfvmc"); }
