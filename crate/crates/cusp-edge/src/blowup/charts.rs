use crate::error::{invalid, Error, Result};

use super::{BasePoint, GeometryParams};

/// Which base space a chart lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseSpace {
    /// `(x, y, z, x', y', z', t)`
    Heat,
    /// `(x, y, z, x', y', z')`
    Double,
}

impl BaseSpace {
    pub fn dim(self, g: &GeometryParams) -> usize {
        match self {
            BaseSpace::Heat => 2 * g.n() + 1,
            BaseSpace::Double => 2 * g.n(),
        }
    }
}

/// Projective coordinate charts.
///
/// | chart | coordinates |
/// |---|---|
/// | `Bkf` | `x', T=√t/x', η=(y−y')/x', s=x/x', y', z, z'` |
/// | `Ff` | `x', T̃=√t/x'^k, η̃=(y−y')/x'^k, s̃=(x−x')/x'^k, y', z, z'` |
/// | `TfFf` | `T̃, Ẽ=(y−y')/√t, S̃=(x−x')/√t, Z̃=(z−z')/T̃, x', y', z'` |
/// | `Double` | `x', s̃=(x−x')/x'^k, η̃=(y−y')/x'^k, y', z, z'` |
/// | `DoubleX` | `x, s̃=(x−x')/x^k, y, η̃=(y−y')/x^k, z, z'` |
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    Bkf,
    Ff,
    TfFf,
    Double,
    DoubleX,
}

/// Smallest allowed `x/x'` in the charts near the diagonal.
pub const RATIO_MARGIN: f64 = 0.1;
/// Allowed range of `s = x/x'` in the back-face chart.
pub const BKF_S_RANGE: (f64, f64) = (0.1, 10.0);

impl Chart {
    pub const ALL: [Chart; 5] = [Chart::Bkf, Chart::Ff, Chart::TfFf, Chart::Double, Chart::DoubleX];

    pub fn name(self) -> &'static str {
        match self {
            Chart::Bkf => "bkf",
            Chart::Ff => "ff",
            Chart::TfFf => "tf-ff",
            Chart::Double => "double-ff",
            Chart::DoubleX => "double-ff-x",
        }
    }

    pub fn space(self) -> BaseSpace {
        match self {
            Chart::Bkf | Chart::Ff | Chart::TfFf => BaseSpace::Heat,
            Chart::Double | Chart::DoubleX => BaseSpace::Double,
        }
    }

    pub fn dim(self, g: &GeometryParams) -> usize {
        self.space().dim(g)
    }

    /// Coordinate labels in storage order.
    pub fn coordinate_names(self, g: &GeometryParams) -> Vec<String> {
        fn v(p: &str, n: usize) -> impl Iterator<Item = String> + '_ {
            (1..=n).map(move |i| format!("{p}{i}"))
        }
        let one = |s: &str| std::iter::once(s.to_string());
        let (b, f) = (g.b, g.f);
        match self {
            Chart::Bkf => one("x'")
                .chain(one("T"))
                .chain(v("eta", b))
                .chain(one("s"))
                .chain(v("y'", b))
                .chain(v("z", f))
                .chain(v("z'", f))
                .collect(),
            Chart::Ff => one("x'")
                .chain(one("T~"))
                .chain(v("eta~", b))
                .chain(one("s~"))
                .chain(v("y'", b))
                .chain(v("z", f))
                .chain(v("z'", f))
                .collect(),
            Chart::TfFf => one("T~")
                .chain(v("E~", b))
                .chain(one("S~"))
                .chain(v("Z~", f))
                .chain(one("x'"))
                .chain(v("y'", b))
                .chain(v("z'", f))
                .collect(),
            Chart::Double => one("x'")
                .chain(one("s~"))
                .chain(v("eta~", b))
                .chain(v("y'", b))
                .chain(v("z", f))
                .chain(v("z'", f))
                .collect(),
            Chart::DoubleX => one("x")
                .chain(one("s~"))
                .chain(v("y", b))
                .chain(v("eta~", b))
                .chain(v("z", f))
                .chain(v("z'", f))
                .collect(),
        }
    }

    /// Index of a named coordinate.
    pub fn index_of(self, g: &GeometryParams, name: &str) -> Option<usize> {
        self.coordinate_names(g).iter().position(|n| n == name)
    }

    /// Validity predicate with the margins documented on the module.
    pub fn contains(self, g: &GeometryParams, c: &[f64]) -> bool {
        if c.len() != self.dim(g) || c.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let k = g.k as i32;
        let b = g.b;
        match self {
            Chart::Bkf => {
                let s = c[2 + b];
                c[0] > 0.0 && c[1] > 0.0 && (BKF_S_RANGE.0..=BKF_S_RANGE.1).contains(&s)
            }
            Chart::Ff => {
                let (xp, tt, st) = (c[0], c[1], c[2 + b]);
                xp > 0.0 && tt > 0.0 && 1.0 + xp.powi(k - 1) * st >= RATIO_MARGIN
            }
            Chart::TfFf => {
                let (tt, ss, xp) = (c[0], c[1 + b], c[2 + b + g.f]);
                tt > 0.0 && xp > 0.0 && 1.0 + ss * tt * xp.powi(k - 1) >= RATIO_MARGIN
            }
            Chart::Double => {
                let (xp, st) = (c[0], c[1]);
                xp > 0.0 && 1.0 + xp.powi(k - 1) * st >= RATIO_MARGIN
            }
            Chart::DoubleX => {
                let (x, st) = (c[0], c[1]);
                x > 0.0 && 1.0 - x.powi(k - 1) * st >= RATIO_MARGIN
            }
        }
    }

    /// Chart coordinates to flat base coordinates.
    pub fn to_base(self, g: &GeometryParams, c: &[f64]) -> Result<Vec<f64>> {
        if c.len() != self.dim(g) {
            return Err(Error::DimensionMismatch { left: c.len(), right: self.dim(g) });
        }
        if !self.contains(g, c) {
            return invalid(format!("point outside the {} chart validity region", self.name()));
        }
        let (b, f) = (g.b, g.f);
        let k = g.k as i32;
        let mut p = BasePoint::zeros(g);
        match self {
            Chart::Bkf => {
                let xp = c[0];
                let tt = c[1];
                let eta = &c[2..2 + b];
                let s = c[2 + b];
                let yp = &c[3 + b..3 + 2 * b];
                let z = &c[3 + 2 * b..3 + 2 * b + f];
                let zp = &c[3 + 2 * b + f..];
                p.x = s * xp;
                p.xp = xp;
                p.t = (tt * xp).powi(2);
                for i in 0..b {
                    p.y[i] = yp[i] + eta[i] * xp;
                    p.yp[i] = yp[i];
                }
                p.z.copy_from_slice(z);
                p.zp.copy_from_slice(zp);
            }
            Chart::Ff => {
                let xp = c[0];
                let xk = xp.powi(k);
                let tt = c[1];
                let eta = &c[2..2 + b];
                let st = c[2 + b];
                let yp = &c[3 + b..3 + 2 * b];
                p.x = xp + st * xk;
                p.xp = xp;
                p.t = (tt * xk).powi(2);
                for i in 0..b {
                    p.y[i] = yp[i] + eta[i] * xk;
                    p.yp[i] = yp[i];
                }
                p.z.copy_from_slice(&c[3 + 2 * b..3 + 2 * b + f]);
                p.zp.copy_from_slice(&c[3 + 2 * b + f..]);
            }
            Chart::TfFf => {
                let tt = c[0];
                let e = &c[1..1 + b];
                let ss = c[1 + b];
                let zz = &c[2 + b..2 + b + f];
                let xp = c[2 + b + f];
                let yp = &c[3 + b + f..3 + 2 * b + f];
                let zp = &c[3 + 2 * b + f..];
                let tau = tt * xp.powi(k);
                p.t = tau * tau;
                p.x = xp + ss * tau;
                p.xp = xp;
                for i in 0..b {
                    p.y[i] = yp[i] + e[i] * tau;
                    p.yp[i] = yp[i];
                }
                for i in 0..f {
                    p.z[i] = zp[i] + zz[i] * tt;
                    p.zp[i] = zp[i];
                }
            }
            Chart::Double => {
                let xp = c[0];
                let xk = xp.powi(k);
                let st = c[1];
                let eta = &c[2..2 + b];
                let yp = &c[2 + b..2 + 2 * b];
                p.x = xp + st * xk;
                p.xp = xp;
                for i in 0..b {
                    p.y[i] = yp[i] + eta[i] * xk;
                    p.yp[i] = yp[i];
                }
                p.z.copy_from_slice(&c[2 + 2 * b..2 + 2 * b + f]);
                p.zp.copy_from_slice(&c[2 + 2 * b + f..]);
            }
            Chart::DoubleX => {
                let x = c[0];
                let xk = x.powi(k);
                let st = c[1];
                let y = &c[2..2 + b];
                let eta = &c[2 + b..2 + 2 * b];
                p.x = x;
                p.xp = x - st * xk;
                for i in 0..b {
                    p.y[i] = y[i];
                    p.yp[i] = y[i] - eta[i] * xk;
                }
                p.z.copy_from_slice(&c[2 + 2 * b..2 + 2 * b + f]);
                p.zp.copy_from_slice(&c[2 + 2 * b + f..]);
            }
        }
        Ok(p.to_flat(self.space()))
    }

    /// Flat base coordinates to chart coordinates.
    pub fn from_base(self, g: &GeometryParams, flat: &[f64]) -> Result<Vec<f64>> {
        let p = BasePoint::from_flat(g, self.space(), flat)?;
        if !(p.x > 0.0 && p.xp > 0.0) {
            return invalid("base point must have x > 0 and x' > 0");
        }
        if self.space() == BaseSpace::Heat && !(p.t > 0.0) {
            return invalid("base point must have t > 0");
        }
        let k = g.k as i32;
        let mut c = Vec::with_capacity(self.dim(g));
        match self {
            Chart::Bkf => {
                let tau = p.t.sqrt();
                c.push(p.xp);
                c.push(tau / p.xp);
                c.extend(p.y.iter().zip(&p.yp).map(|(y, yp)| (y - yp) / p.xp));
                c.push(p.x / p.xp);
                c.extend(&p.yp);
                c.extend(&p.z);
                c.extend(&p.zp);
            }
            Chart::Ff => {
                let xk = p.xp.powi(k);
                c.push(p.xp);
                c.push(p.t.sqrt() / xk);
                c.extend(p.y.iter().zip(&p.yp).map(|(y, yp)| (y - yp) / xk));
                c.push((p.x - p.xp) / xk);
                c.extend(&p.yp);
                c.extend(&p.z);
                c.extend(&p.zp);
            }
            Chart::TfFf => {
                let tau = p.t.sqrt();
                let tt = tau / p.xp.powi(k);
                c.push(tt);
                c.extend(p.y.iter().zip(&p.yp).map(|(y, yp)| (y - yp) / tau));
                c.push((p.x - p.xp) / tau);
                c.extend(p.z.iter().zip(&p.zp).map(|(z, zp)| (z - zp) / tt));
                c.push(p.xp);
                c.extend(&p.yp);
                c.extend(&p.zp);
            }
            Chart::Double => {
                let xk = p.xp.powi(k);
                c.push(p.xp);
                c.push((p.x - p.xp) / xk);
                c.extend(p.y.iter().zip(&p.yp).map(|(y, yp)| (y - yp) / xk));
                c.extend(&p.yp);
                c.extend(&p.z);
                c.extend(&p.zp);
            }
            Chart::DoubleX => {
                let xk = p.x.powi(k);
                c.push(p.x);
                c.push((p.x - p.xp) / xk);
                c.extend(&p.y);
                c.extend(p.y.iter().zip(&p.yp).map(|(y, yp)| (y - yp) / xk));
                c.extend(&p.z);
                c.extend(&p.zp);
            }
        }
        if !self.contains(g, &c) {
            return invalid(format!("image lies outside the {} chart validity region", self.name()));
        }
        Ok(c)
    }
}

macro_rules! typed_chart {
    ($(#[$m:meta])* $name:ident, $chart:expr, { $($field:ident : $ty:ty),* $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            $(pub $field: $ty,)*
        }

        impl $name {
            pub const CHART: Chart = $chart;

            pub fn to_base(&self, g: &GeometryParams) -> Result<BasePoint> {
                let flat = Self::CHART.to_base(g, &self.to_coords())?;
                BasePoint::from_flat(g, Self::CHART.space(), &flat)
            }

            pub fn from_base(p: &BasePoint, g: &GeometryParams) -> Result<Self> {
                let c = Self::CHART.from_base(g, &p.to_flat(Self::CHART.space()))?;
                Ok(Self::from_coords(g, &c))
            }

            pub fn to_coords(&self) -> Vec<f64> {
                let mut c = Vec::new();
                $(Extend::extend(&mut c, AsCoords::coords(&self.$field));)*
                c
            }

            pub fn from_coords(g: &GeometryParams, c: &[f64]) -> Self {
                let mut at = 0usize;
                $(let $field = <$ty as AsCoords>::take(g, stringify!($field), c, &mut at);)*
                Self { $($field,)* }
            }
        }
    };
}

trait AsCoords: Sized {
    fn coords(&self) -> Vec<f64>;
    fn take(g: &GeometryParams, field: &str, c: &[f64], at: &mut usize) -> Self;
}

impl AsCoords for f64 {
    fn coords(&self) -> Vec<f64> {
        vec![*self]
    }
    fn take(_: &GeometryParams, _: &str, c: &[f64], at: &mut usize) -> Self {
        *at += 1;
        c[*at - 1]
    }
}

impl AsCoords for Vec<f64> {
    fn coords(&self) -> Vec<f64> {
        self.clone()
    }
    fn take(g: &GeometryParams, field: &str, c: &[f64], at: &mut usize) -> Self {
        let len = if field.starts_with('z') { g.f } else { g.b };
        *at += len;
        c[*at - len..*at].to_vec()
    }
}

typed_chart!(
    /// Back-face chart of the heat space.
    BkfChartPoint, Chart::Bkf, { xp: f64, tt: f64, eta: Vec<f64>, s: f64, yp: Vec<f64>, z: Vec<f64>, zp: Vec<f64> }
);
typed_chart!(
    /// Front-face chart of the heat space.
    FfChartPoint, Chart::Ff, { xp: f64, tt: f64, eta: Vec<f64>, st: f64, yp: Vec<f64>, z: Vec<f64>, zp: Vec<f64> }
);
typed_chart!(
    /// Chart near the corner of the temporal and front faces.
    TfFfChartPoint, Chart::TfFf, { tt: f64, e: Vec<f64>, ss: f64, z_t: Vec<f64>, xp: f64, yp: Vec<f64>, zp: Vec<f64> }
);
typed_chart!(
    /// Front-face chart of the double space.
    DoubleChartPoint, Chart::Double, { xp: f64, st: f64, eta: Vec<f64>, yp: Vec<f64>, z: Vec<f64>, zp: Vec<f64> }
);
