//! Fixed-size vector helpers. Planar points carry a zero third component.

use crate::scalar::Real;

pub type Point<T> = [T; 3];

#[inline]
pub fn from_slice<T: Real>(x: &[T]) -> Point<T> {
    let mut p = [T::zero(); 3];
    for (dst, &src) in p.iter_mut().zip(x.iter()) {
        *dst = src;
    }
    p
}

#[inline]
pub fn add<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub<T: Real>(a: Point<T>, b: Point<T>) -> Point<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale<T: Real>(a: Point<T>, s: T) -> Point<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn axpy<T: Real>(a: Point<T>, s: T, d: Point<T>) -> Point<T> {
    [a[0] + s * d[0], a[1] + s * d[1], a[2] + s * d[2]]
}

#[inline]
pub fn dot<T: Real>(a: Point<T>, b: Point<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm<T: Real>(a: Point<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist<T: Real>(a: Point<T>, b: Point<T>) -> T {
    norm(sub(a, b))
}

#[inline]
pub fn unit_axis<T: Real>(k: usize) -> Point<T> {
    let mut e = [T::zero(); 3];
    e[k] = T::one();
    e
}
