/** A batched text scorer; scores are P(ai-generated) in [0, 1]. */
export interface Scorer {
  name: string;
  scoreAi(texts: string[]): Promise<number[]>;
}
