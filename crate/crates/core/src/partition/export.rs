use std::fmt::Write as _;
use std::path::Path;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::model::Region;
use crate::scalar::format_rational;

use super::PartitionResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Svg,
}

impl PartitionResult {
    fn labelled(&self) -> impl Iterator<Item = (&Region, &'static str)> {
        let tag = |label| move |r| (r, label);
        self.accepted
            .iter()
            .map(tag("accepting"))
            .chain(self.rejected.iter().map(tag("rejecting")))
            .chain(self.unknown.iter().map(tag("unknown")))
    }

    /// One row per region with exact bounds and the verdict.
    pub fn to_csv(&self, params: &[String]) -> String {
        let mut out = String::new();
        for x in params {
            write!(out, "{x}_lo,{x}_hi,").unwrap();
        }
        out.push_str("verdict\n");
        for (region, label) in self.labelled() {
            for (lo, hi) in region.bounds() {
                write!(out, "{},{},", format_rational(lo), format_rational(hi)).unwrap();
            }
            writeln!(out, "{label}").unwrap();
        }
        out
    }

    /// Rectangles over the input box: green accepted, red rejected, white
    /// unknown. Only defined for two parameters.
    pub fn to_svg(&self, params: &[String]) -> Result<String> {
        if self.region.dim() != 2 || params.len() != 2 {
            return Err(Error::Dimension(format!(
                "SVG export needs exactly 2 parameters, got {}",
                self.region.dim()
            )));
        }
        const SIZE: f64 = 400.0;
        const PAD: f64 = 40.0;
        let f = |r: &crate::Rational| r.to_f64().unwrap_or(0.0);
        let (x0, x1) = (f(self.region.lower(0)), f(self.region.upper(0)));
        let (y0, y1) = (f(self.region.lower(1)), f(self.region.upper(1)));
        let sx = |x: f64| PAD + (x - x0) / (x1 - x0).max(f64::MIN_POSITIVE) * SIZE;
        let sy = |y: f64| PAD + SIZE - (y - y0) / (y1 - y0).max(f64::MIN_POSITIVE) * SIZE;
        let mut out = String::new();
        let total = SIZE + 2.0 * PAD;
        writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
        )
        .unwrap();
        for (region, label) in self.labelled() {
            let fill = match label {
                "accepting" => "#3cb44b",
                "rejecting" => "#e6194b",
                _ => "#ffffff",
            };
            let (left, right) = (sx(f(region.lower(0))), sx(f(region.upper(0))));
            let (top, bottom) = (sy(f(region.upper(1))), sy(f(region.lower(1))));
            writeln!(
                out,
                r#"  <rect x="{left:.3}" y="{top:.3}" width="{:.3}" height="{:.3}" fill="{fill}" stroke="black" stroke-width="0.3"/>"#,
                right - left,
                bottom - top
            )
            .unwrap();
        }
        writeln!(
            out,
            r#"  <text x="{}" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            PAD + SIZE / 2.0,
            total - 10.0,
            params[0]
        )
        .unwrap();
        writeln!(
            out,
            r#"  <text x="14" y="{}" text-anchor="middle" font-size="14">{}</text>"#,
            PAD + SIZE / 2.0,
            params[1]
        )
        .unwrap();
        out.push_str("</svg>\n");
        Ok(out)
    }

    pub fn export(&self, format: ExportFormat, params: &[String], path: &Path) -> Result<()> {
        let text = match format {
            ExportFormat::Csv => self.to_csv(params),
            ExportFormat::Svg => self.to_svg(params)?,
        };
        std::fs::write(path, text)?;
        Ok(())
    }
}
