use crate::game::{Edge, GameState, Player, Strategy};
use crate::props::LosingProperty;

use super::TieBreak;

/// Claims edges of a fixed maximum property-free graph first, then anything.
#[derive(Clone, Debug)]
pub struct ExtremalAvoider {
    property: LosingProperty,
    tie: TieBreak,
    witness: Vec<Edge>,
    cursor: usize,
    off_witness: usize,
}

impl ExtremalAvoider {
    pub fn new(property: LosingProperty) -> Self {
        Self::with_tie_break(property, TieBreak::Lex)
    }

    pub fn with_tie_break(property: LosingProperty, tie: TieBreak) -> Self {
        ExtremalAvoider {
            property,
            tie,
            witness: Vec::new(),
            cursor: 0,
            off_witness: 0,
        }
    }
}

impl Strategy for ExtremalAvoider {
    fn name(&self) -> String {
        let base = format!("extremal_avoider:{}", self.property.id());
        if self.tie.is_random() {
            base + ":random"
        } else {
            base
        }
    }

    fn start(&mut self, n: usize, _side: Player, seed: u64) {
        self.witness = self.property.extremal_set(n);
        self.cursor = 0;
        self.off_witness = 0;
        self.tie.reseed(seed);
    }

    fn choose(&mut self, state: &GameState) -> Edge {
        if self.tie.is_random() {
            let open = self.witness.iter().copied().filter(|&e| state.is_unclaimed(e));
            if let Some(e) = self.tie.pick(open) {
                return e;
            }
        } else {
            while let Some(&e) = self.witness.get(self.cursor) {
                if state.is_unclaimed(e) {
                    return e;
                }
                self.cursor += 1;
            }
        }
        self.off_witness += 1;
        self.tie
            .pick(state.unclaimed())
            .expect("choose called on a finished board")
    }

    fn stats(&self) -> Vec<(String, String)> {
        vec![("off_witness_moves".into(), self.off_witness.to_string())]
    }

    fn clone_box(&self) -> Box<dyn Strategy> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::new_game;

    #[test]
    fn prefers_witness_edges_in_order() {
        let mut s = ExtremalAvoider::new(LosingProperty::ConnectedSpanning);
        s.start(4, Player::Avoider, 0);
        // witness is K_3 on {0,1,2}
        let mut st = new_game(4).unwrap();
        assert_eq!(s.choose(&st), Edge::new(0, 1));
        st.apply_move(Edge::new(0, 1)).unwrap();
        st.apply_move(Edge::new(0, 2)).unwrap();
        assert_eq!(s.choose(&st), Edge::new(1, 2));
        st.apply_move(Edge::new(1, 2)).unwrap();
        st.apply_move(Edge::new(0, 3)).unwrap();
        assert_eq!(s.choose(&st), Edge::new(1, 3));
    }
}
