pub mod dessin;
pub mod fpgroup;
pub mod group;
pub mod moduli;
pub mod perm;
pub mod triangle;
pub mod word;
