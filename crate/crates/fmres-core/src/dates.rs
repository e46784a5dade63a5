//! Calendar months and raw observation dates.
//!
//! Panels live at monthly frequency, so [`Month`] is the primary date type.
//! [`ObsDate`] is what a CSV cell parses into before alignment: either a bare
//! month label (`2015-03`) or an exact day (`2015-03-17`).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// A calendar month.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Month {
    year: i32,
    month: u8,
}

impl Month {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::invalid(format!("month {month} out of range 1..=12")));
        }
        Ok(Month { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    /// Months elapsed since 0000-01; consecutive months differ by exactly 1.
    pub fn index(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn next(&self) -> Month {
        if self.month == 12 {
            Month {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Month {
                year: self.year,
                month: self.month + 1,
            }
        }
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for Month {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (y, m) = s
            .split_once('-')
            .ok_or_else(|| Error::invalid(format!("date '{s}' is not YYYY-MM")))?;
        let year: i32 = y
            .parse()
            .map_err(|_| Error::invalid(format!("bad year in date '{s}'")))?;
        let month: u8 = m
            .parse()
            .map_err(|_| Error::invalid(format!("bad month in date '{s}'")))?;
        Month::new(year, month)
    }
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 => {
            let leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
            if leap {
                29
            } else {
                28
            }
        }
        _ => unreachable!("month validated on construction"),
    }
}

/// A single dated observation: a month, optionally pinned to a day.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObsDate {
    pub month: Month,
    pub day: Option<u8>,
}

impl ObsDate {
    pub fn is_monthly(&self) -> bool {
        self.day.is_none()
    }
}

impl fmt::Display for ObsDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.day {
            Some(d) => write!(f, "{}-{:02}", self.month, d),
            None => write!(f, "{}", self.month),
        }
    }
}

impl FromStr for ObsDate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('-');
        let y = parts.next().unwrap_or("");
        let m = parts.next();
        let d = parts.next();
        if parts.next().is_some() {
            return Err(Error::invalid(format!(
                "date '{s}' is neither YYYY-MM nor YYYY-MM-DD"
            )));
        }
        let month = match m {
            Some(m) => Month::from_str(&format!("{y}-{m}"))?,
            None => return Err(Error::invalid(format!("date '{s}' is missing a month"))),
        };
        let day = match d {
            None => None,
            Some(d) => {
                let day: u8 = d
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad day in date '{s}'")))?;
                let max = days_in_month(month.year(), month.month());
                if day == 0 || day > max {
                    return Err(Error::invalid(format!(
                        "day {day} out of range for {month}"
                    )));
                }
                Some(day)
            }
        };
        Ok(ObsDate { month, day })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn month_parse_and_format_round_trip() {
        let m: Month = "2015-03".parse().unwrap();
        assert_eq!(m.year(), 2015);
        assert_eq!(m.month(), 3);
        assert_eq!(m.to_string(), "2015-03");
    }

    #[test]
    fn month_ordering_and_next() {
        let dec: Month = "2019-12".parse().unwrap();
        let jan: Month = "2020-01".parse().unwrap();
        assert!(dec < jan);
        assert_eq!(dec.next(), jan);
        assert_eq!(jan.index() - dec.index(), 1);
    }

    #[test]
    fn bad_months_rejected() {
        assert!("2015-13".parse::<Month>().is_err());
        assert!("2015-00".parse::<Month>().is_err());
        assert!("2015".parse::<Month>().is_err());
        assert!("abcd-01".parse::<Month>().is_err());
    }

    #[test]
    fn obs_date_parses_both_granularities() {
        let m: ObsDate = "2015-03".parse().unwrap();
        assert!(m.is_monthly());
        let d: ObsDate = "2015-03-17".parse().unwrap();
        assert_eq!(d.day, Some(17));
        assert!(d > m);
    }

    #[test]
    fn obs_date_validates_day_against_calendar() {
        assert!("2015-02-29".parse::<ObsDate>().is_err());
        assert!("2016-02-29".parse::<ObsDate>().is_ok());
        assert!("1900-02-29".parse::<ObsDate>().is_err());
        assert!("2000-02-29".parse::<ObsDate>().is_ok());
        assert!("2015-04-31".parse::<ObsDate>().is_err());
        assert!("2015-03-00".parse::<ObsDate>().is_err());
    }
}
