fn main() { println!("imt placeholder"); }
