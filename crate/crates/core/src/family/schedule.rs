use super::SelectionFamily;
use crate::{Error, Result};

/// Per-run cursor over a shared family: set `cursor` lists the labels chosen
/// in the current round of the execution.
#[derive(Clone, Debug)]
pub struct RoundSchedule<'a> {
    family: &'a SelectionFamily,
    cursor: usize,
}

impl<'a> RoundSchedule<'a> {
    pub fn new(family: &'a SelectionFamily) -> Self {
        RoundSchedule { family, cursor: 0 }
    }

    pub fn family(&self) -> &'a SelectionFamily {
        self.family
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn is_exhausted(&self) -> bool {
        self.cursor >= self.family.len()
    }

    /// Whether element `e` is chosen in the current round.
    pub fn selected(&self, e: u64) -> Result<bool> {
        if self.is_exhausted() {
            return Err(Error::ScheduleExhausted {
                cursor: self.cursor,
                len: self.family.len(),
            });
        }
        Ok(self.family.contains(self.cursor, e))
    }

    pub fn advance(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::ScheduleExhausted {
                cursor: self.cursor,
                len: self.family.len(),
            });
        }
        self.cursor += 1;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{construct_ssf, SelectionFamily};

    #[test]
    fn singleton_schedule() {
        let f = construct_ssf(4, 4, 0).unwrap();
        let mut s = RoundSchedule::new(&f);
        assert!(s.selected(1).unwrap());
        assert!(!s.selected(2).unwrap());
        for _ in 0..4 {
            s.advance().unwrap();
        }
        assert!(matches!(
            s.selected(1),
            Err(Error::ScheduleExhausted { cursor: 4, len: 4 })
        ));
        assert!(s.advance().is_err());
    }

    #[test]
    fn agrees_with_set_membership() {
        let f: SelectionFamily = construct_ssf(32, 3, 12).unwrap();
        let mut s = RoundSchedule::new(&f);
        for j in 0..f.len() {
            let set = f.set(j);
            for e in 1..=32 {
                assert_eq!(s.selected(e).unwrap(), set.contains(&e));
            }
            s.advance().unwrap();
        }
        assert!(s.is_exhausted());
    }
}
