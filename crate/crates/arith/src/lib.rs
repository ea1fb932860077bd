//! Word-size number theory shared by the rest of the workspace.
//!
//! Everything here works on `u64` residues with `u128` intermediates.

pub mod exec;
pub mod modular;
pub mod prime;
pub mod qr;

pub use exec::Exec;
pub use modular::{gcd, inv_mod, lcm, mul_mod, pow_mod};
pub use prime::{factor, is_prime, largest_prime_factor, next_prime, primes_up_to, primitive_root};
pub use qr::{jacobi, legendre_euler, sqrt_mod, QrTable};
