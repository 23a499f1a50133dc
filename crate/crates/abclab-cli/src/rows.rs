//! Report rows with a stable column schema, emitted as CSV or as one JSON
//! object per line. Floats are fixed to six decimals in CSV so output is
//! byte-identical run to run.

use serde::Serialize;

pub trait Row: Serialize {
    const HEADER: &'static str;
    fn csv(&self) -> String;
}

pub fn f6(x: f64) -> String {
    format!("{x:.6}")
}

#[derive(Serialize)]
pub struct TripleRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub h: f64,
    pub log_rad: f64,
    pub quality: f64,
    pub margin: f64,
}

impl Row for TripleRow {
    const HEADER: &'static str = "a,b,c,h,log_rad,quality,margin";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            f6(self.h),
            f6(self.log_rad),
            f6(self.quality),
            f6(self.margin)
        )
    }
}

#[derive(Serialize)]
pub struct VerifyCsvRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n: u32,
    pub lemma35_ok: bool,
    pub lemma35_slack: f64,
    pub cor36_ok: bool,
    pub lemma311_ok: bool,
    pub eq34_ok: bool,
    pub equations_ok: bool,
}

impl Row for VerifyCsvRow {
    const HEADER: &'static str =
        "a,b,c,n,lemma35_ok,lemma35_slack,cor36_ok,lemma311_ok,eq34_ok,equations_ok";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            self.n,
            self.lemma35_ok,
            f6(self.lemma35_slack),
            self.cor36_ok,
            self.lemma311_ok,
            self.eq34_ok,
            self.equations_ok
        )
    }
}

#[derive(Serialize)]
pub struct PowerCsvRow {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub m: u32,
    pub h_abc: f64,
    pub h_uvw: f64,
    pub h_xyz: f64,
    pub n_abc: f64,
    pub chain1_ok: bool,
    pub chain2_ok: bool,
    pub eps_emp: f64,
}

impl Row for PowerCsvRow {
    const HEADER: &'static str = "a,b,c,m,h_abc,h_uvw,h_xyz,n_abc,chain1_ok,chain2_ok,eps_emp";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.a,
            self.b,
            self.c,
            self.m,
            f6(self.h_abc),
            f6(self.h_uvw),
            f6(self.h_xyz),
            f6(self.n_abc),
            self.chain1_ok,
            self.chain2_ok,
            f6(self.eps_emp)
        )
    }
}

#[derive(Serialize)]
pub struct PellRow {
    pub d: u64,
    pub x: String,
    pub y: String,
    pub rhs: i8,
    pub s_x: u64,
    pub s_y: u64,
    pub ratio: f64,
}

impl Row for PellRow {
    const HEADER: &'static str = "d,x,y,rhs,s_x,s_y,ratio";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{:+},{},{},{}",
            self.d,
            self.x,
            self.y,
            self.rhs,
            self.s_x,
            self.s_y,
            f6(self.ratio)
        )
    }
}

#[derive(Serialize)]
pub struct MsRow {
    pub case: String,
    pub deg_a: usize,
    pub deg_b: usize,
    pub deg_c: usize,
    pub maxdeg: usize,
    pub degrad: usize,
    pub ok: bool,
}

impl Row for MsRow {
    const HEADER: &'static str = "case,deg_a,deg_b,deg_c,maxdeg,degrad,ok";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.case, self.deg_a, self.deg_b, self.deg_c, self.maxdeg, self.degrad, self.ok
        )
    }
}

#[derive(Serialize)]
pub struct NevCsvRow {
    pub r: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub m_inf: f64,
    #[serde(rename = "N_inf")]
    pub n_inf: f64,
    #[serde(rename = "N1_D")]
    pub n1_d: f64,
    #[serde(rename = "N_ram")]
    pub n_ram: f64,
    pub m_logderiv: f64,
}

impl Row for NevCsvRow {
    const HEADER: &'static str = "r,T,m_inf,N_inf,N1_D,N_ram,m_logderiv";
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            f6(self.r),
            f6(self.t),
            f6(self.m_inf),
            f6(self.n_inf),
            f6(self.n1_d),
            f6(self.n_ram),
            f6(self.m_logderiv)
        )
    }
}
