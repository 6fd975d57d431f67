fn main() { println!("genealogy CLI placeholder"); }
