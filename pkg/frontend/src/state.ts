// View state shared by all four views. Every mutation bumps a generation
// counter; async responses tagged with an older generation are discarded, so
// a slow fetch can never overwrite the result of a newer interaction.

export interface BrushSpan {
  slot: number;
  t0: number;
  t1: number;
}

export interface ViewState {
  matchId: string | null;
  eventId: string | null;
  playbackTime: number;
  brush: BrushSpan | null;
  selectedRecordId: string | null;
  team: string | null;
  player: string | null;
  champion: string | null;
  showAllGlyphs: boolean;
}

export function initialState(): ViewState {
  return {
    matchId: null,
    eventId: null,
    playbackTime: 0,
    brush: null,
    selectedRecordId: null,
    team: null,
    player: null,
    champion: null,
    showAllGlyphs: false,
  };
}

function clamp(v: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, v));
}

export class ViewStore {
  private state: ViewState = initialState();
  private generation = 0;
  private tStart = 0;
  private tEnd = 0;

  get current(): Readonly<ViewState> {
    return this.state;
  }

  get gen(): number {
    return this.generation;
  }

  /** True iff no newer mutation happened since `gen` was captured. */
  isCurrent(gen: number): boolean {
    return gen === this.generation;
  }

  private bump(patch: Partial<ViewState>): number {
    this.state = { ...this.state, ...patch };
    this.generation += 1;
    return this.generation;
  }

  setTimeline(tStart: number, tEnd: number): void {
    this.tStart = tStart;
    this.tEnd = tEnd;
  }

  selectMatch(matchId: string): number {
    return this.bump({
      matchId,
      eventId: null,
      brush: null,
      selectedRecordId: null,
      playbackTime: this.tStart,
    });
  }

  selectEvent(eventId: string | null): number {
    return this.bump({ eventId });
  }

  seek(t: number): number {
    return this.bump({ playbackTime: clamp(t, this.tStart, this.tEnd) });
  }

  selectRecord(recordId: string | null, tStart?: number): number {
    if (tStart !== undefined) {
      return this.bump({
        selectedRecordId: recordId,
        playbackTime: clamp(tStart, this.tStart, this.tEnd),
      });
    }
    return this.bump({ selectedRecordId: recordId });
  }

  brushLane(slot: number, t0: number, t1: number): number {
    const lo = clamp(Math.min(t0, t1), this.tStart, this.tEnd);
    const hi = clamp(Math.max(t0, t1), this.tStart, this.tEnd);
    return this.bump({ brush: { slot, t0: lo, t1: hi } });
  }

  clearBrush(): number {
    return this.bump({ brush: null });
  }

  selectTeam(team: string | null): number {
    return this.bump({ team });
  }

  selectPlayer(player: string | null, champion: string | null): number {
    return this.bump({ player, champion });
  }

  toggleShowAll(): number {
    return this.bump({ showAllGlyphs: !this.state.showAllGlyphs });
  }
}
