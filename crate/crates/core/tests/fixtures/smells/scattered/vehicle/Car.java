package vehicle;

@Component("Car")
public class Car {
    @Part("rear") private Wheel[] rear;
    @Part("e") private Engine e;

    @AddPart({"rear", "e"})
    @Connects(left = "rear", right = "e.p", type = Arrow.LEFT)
    public Car() { }

    @Disconnects(left = "rear", right = "e.p", type = Arrow.LEFT)
    public void scrap() { }
}
